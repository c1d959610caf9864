#include "mwd/certificate.hpp"

#include <stdexcept>

namespace mwd::certificate {

namespace {

Json header(const char* kind, Field field, std::size_t width) {
  return Json{{"kind", kind}, {"field", std::string(to_string(field))}, {"width", width}};
}

Json matrix_payload(const Matrix& f) {
  return Json{{"rows", f.rows()}, {"cols", f.cols()}, {"matrix", matrix_to_json(f)}};
}

Field field_of(const Json& cert) { return parse_field(cert.at("field").get<std::string>()); }

std::size_t claimed(const Json& cert) { return cert.at("width").get<std::size_t>(); }

Verdict judge(std::size_t recomputed, std::size_t claim) {
  Verdict v{recomputed == claim, recomputed, {}};
  if (!v.ok)
    v.diagnostic = "claimed width " + std::to_string(claim) + " but the certificate has width " +
                   std::to_string(recomputed);
  return v;
}

}  // namespace

Json rank(const DanglingGraph& g, const RankDecTree& tree) {
  Json j = header(rank_kind, g.adjacency.field(), rank_dec_width(g.adjacency, tree));
  j["graph"] = graph_to_json(g);
  j["tree"] = tree_to_json(tree);
  return j;
}

Json recursive(const RecRankDec& t) {
  Json j = header(recursive_kind, t.graph.adjacency.field(), rec_width(t));
  Json body = rec_to_json(t);
  j["graph"] = body.at("graph");
  j["shape"] = body.at("shape");
  return j;
}

Json matrix(const Matrix& f, const bialg::Dec& d) {
  Json j = header(monoidal_kind, f.field(), bialg::width(d));
  j["prop"] = "bialg";
  j["morphism"] = matrix_payload(f);
  j["decomposition"] = bialg::to_json(d);
  return j;
}

Json graph(const gwb::BoundedGraph& g, const gwb::Dec& d) {
  Json j = header(monoidal_kind, g.field(), gwb::width(d));
  j["prop"] = "grph";
  j["morphism"] = gwb::graph_morphism_to_json(g);
  j["decomposition"] = gwb::to_json(d);
  return j;
}

Matrix matrix_from_input(const Json& j, Field field) {
  if (j.is_array()) return matrix_from_json(j, field);
  std::size_t cols = j.contains("cols") ? j.at("cols").get<std::size_t>() : 0;
  Matrix m = matrix_from_json(j.at("matrix"), field, cols);
  if (j.contains("rows") && j.at("rows").get<std::size_t>() != m.rows())
    throw std::invalid_argument("matrix has " + std::to_string(m.rows()) +
                                " rows but declares " + j.at("rows").dump());
  return m;
}

Verdict verify(const Json& cert, const std::optional<Json>& against, gwb::EqualityCaps caps) {
  try {
    const std::string kind = cert.at("kind").get<std::string>();
    const Field field = field_of(cert);
    const std::size_t claim = claimed(cert);

    if (kind == rank_kind) {
      DanglingGraph g = graph_from_json(against ? *against : cert.at("graph"), field);
      RankDecTree tree = tree_from_json(cert.at("tree"));
      tree.check(g.adjacency.rows());
      return judge(rank_dec_width(g.adjacency, tree), claim);
    }
    if (kind == recursive_kind) {
      RecRankDec t{graph_from_json(against ? *against : cert.at("graph"), field),
                   shape_from_json(cert.at("shape"))};
      t.check();
      return judge(rec_width(t), claim);
    }
    if (kind == monoidal_kind) {
      const std::string prop = cert.at("prop").get<std::string>();
      if (prop == "bialg") {
        Matrix f = matrix_from_input(against ? *against : cert.at("morphism"), field);
        bialg::Dec d = bialg::from_json(cert.at("decomposition"), field);
        Validation valid = bialg::validate(d, f);
        if (!valid) return {false, std::nullopt, valid.diagnostic};
        return judge(bialg::width(d), claim);
      }
      if (prop == "grph") {
        gwb::BoundedGraph g =
            against ? gwb::from_dangling(graph_from_json(*against, field))
                    : gwb::graph_morphism_from_json(cert.at("morphism"), field);
        gwb::Dec d = gwb::from_json(cert.at("decomposition"), field);
        Validation valid = gwb::validate(d, g, caps);
        if (!valid) return {false, std::nullopt, valid.diagnostic};
        return judge(gwb::width(d), claim);
      }
      return {false, std::nullopt, "unknown prop '" + prop + "'"};
    }
    return {false, std::nullopt, "unknown certificate kind '" + kind + "'"};
  } catch (const CapExceeded&) {
    throw;
  } catch (const std::exception& e) {
    return {false, std::nullopt, e.what()};
  }
}

Json convert(const Json& cert, const std::string& target) {
  if (target != "rank" && target != "recursive" && target != "monoidal")
    throw std::invalid_argument("unknown conversion target '" + target + "'");
  const std::string kind = cert.at("kind").get<std::string>();
  const Field field = field_of(cert);

  RecRankDec rec;
  if (kind == rank_kind) {
    DanglingGraph g = graph_from_json(cert.at("graph"), field);
    RankDecTree tree = tree_from_json(cert.at("tree"));
    if (target == "rank") return certificate::rank(g, tree);
    rec = to_recursive(tree, g);
  } else if (kind == recursive_kind) {
    rec = RecRankDec{graph_from_json(cert.at("graph"), field), shape_from_json(cert.at("shape"))};
    rec.check();
  } else if (kind == monoidal_kind) {
    if (cert.at("prop") != "grph")
      throw std::invalid_argument("only graph certificates convert to rank decompositions");
    gwb::BoundedGraph g = gwb::graph_morphism_from_json(cert.at("morphism"), field);
    gwb::Dec d = gwb::from_json(cert.at("decomposition"), field);
    if (target == "monoidal") return certificate::graph(g, d);
    rec = gwb::monoidal_to_rank(d, g);
  } else {
    throw std::invalid_argument("unknown certificate kind '" + kind + "'");
  }

  if (target == "recursive") return recursive(rec);
  if (target == "rank") return certificate::rank(rec.graph, to_rank_dec(rec));
  return certificate::graph(gwb::from_dangling(rec.graph), gwb::rank_to_monoidal(rec));
}

}  // namespace mwd::certificate
