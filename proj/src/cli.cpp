#include "mwd/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "mwd/certificate.hpp"
#include "mwd/diagram.hpp"
#include "mwd/linalg.hpp"

namespace mwd::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string field = "gf2";
  std::string format = "json";
  std::uint64_t seed = 0;
  std::size_t max_vertices = SolverCaps{}.max_vertices;
  std::string out, in, against;
  bool error_json = false;

  // per command
  std::string to;
  std::size_t budget = 0;
  std::string kind = "graph";
  std::size_t vertices = 6, ports = 0, rows = 3, cols = 3;
  long max_entry = 3;
  double density = 0.5;
  std::string expr, prop = "bialg";
};

std::string read_input(const std::string& path) {
  if (path.empty()) throw UsageError("--in is required");
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << file.rdbuf();
  return s.str();
}

bool looks_like_json(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(what + " is not valid JSON: " + e.what());
  }
}

DanglingGraph read_graph(const std::string& path, Field field) {
  std::string text = read_input(path);
  if (looks_like_json(text)) return graph_from_json(parse_json(text, path), field);
  return graph_from_text(text, field);
}

/// JSON form of a graph file, for verify --against.
Json graph_json(const std::string& path, Field field) {
  return graph_to_json(read_graph(path, field));
}

std::string rational_text(const Rational& q) { return q.get_str(); }

std::string tree_text(const RankDecTree& tree) {
  std::ostringstream s;
  s << "tree with " << tree.nodes << " nodes\n";
  for (auto [a, b] : tree.edges) s << "edge " << a << ' ' << b << '\n';
  for (std::size_t v = 0; v < tree.leaf_of.size(); ++v)
    s << "leaf " << v << " at node " << tree.leaf_of[v] << '\n';
  return s.str();
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out), field_(parse_field(o.field)) {
    if (o_.format != "json" && o_.format != "dot" && o_.format != "text")
      throw UsageError("--format must be json, dot or text");
  }

  int rankwidth() {
    DanglingGraph g = read_graph(o_.in, field_);
    RankWidthResult r = rwd_exact(g.adjacency, caps());
    if (o_.format == "text") return emit(std::to_string(r.width) + "\n" + tree_text(r.tree));
    if (o_.format == "dot") return emit(tree_to_dot(r.tree, g.adjacency));
    return emit(certificate::rank(g, r.tree));
  }

  int rrwd() {
    DanglingGraph g = read_graph(o_.in, field_);
    RecRankWidthResult r = rrwd_exact(g, caps());
    if (o_.format == "text")
      return emit(std::to_string(r.width) + "\n" + shape_to_json(r.decomposition.shape).dump() +
                  "\n");
    if (o_.format == "dot") return emit(rec_to_dot(r.decomposition));
    return emit(certificate::recursive(r.decomposition));
  }

  int mwd_matrix() {
    Matrix f = certificate::matrix_from_input(parse_json(read_input(o_.in), o_.in), field_);
    bialg::Dec d = bialg::best_decomposition(f);
    Json ranks = Json::array();
    std::size_t max_rank = 0;
    for (const Matrix& factor : bialg::tensor_factorize(f)) {
      std::size_t r = mwd::rank(factor);
      ranks.push_back(r);
      max_rank = std::max(max_rank, r);
    }
    const std::size_t leaks = bialg::non_atomic_leaves(d);
    if (o_.format == "dot") return emit(bialg::to_dot(d));
    if (o_.format == "text") {
      std::ostringstream s;
      s << bialg::width(d) << "\nfactor ranks " << ranks.dump() << "\nmonoidal width in ["
        << max_rank << ", " << max_rank + 1 << "]\n";
      if (leaks) s << leaks << " leaves are not generators\n";
      return emit(s.str());
    }
    Json cert = certificate::matrix(f, d);
    cert["report"] = {{"factor_ranks", ranks},
                      {"lower", max_rank},
                      {"upper", max_rank + 1},
                      {"non_generator_leaves", leaks}};
    return emit(cert);
  }

  int mwd_graph() {
    DanglingGraph g = read_graph(o_.in, field_);
    if (g.boundary.cols() != 0)
      throw UsageError("mwd-graph takes a graph without dangling edges");
    gwb::GraphWidthBounds b = gwb::mwd_graph_bounds(g.adjacency, caps());
    if (o_.format == "dot") return emit(gwb::to_dot(b.certificate));
    if (o_.format == "text") {
      std::ostringstream s;
      s << b.upper << "\nrank width " << b.rank_width << "\nmonoidal width in ["
        << rational_text(b.lower) << ", " << b.upper << "]\n";
      return emit(s.str());
    }
    Json cert = certificate::graph(gwb::from_dangling(g), b.certificate);
    cert["report"] = {{"lower", rational_text(b.lower)},
                      {"upper", b.upper},
                      {"rank_width", b.rank_width}};
    return emit(cert);
  }

  int convert() {
    if (o_.to.empty()) throw UsageError("--to is required");
    Json cert = parse_json(read_input(o_.in), o_.in);
    return emit(certificate::convert(cert, o_.to));
  }

  int verify(std::ostream& err) {
    Json cert = parse_json(read_input(o_.in), o_.in);
    std::optional<Json> against;
    if (!o_.against.empty()) {
      const bool bialg = cert.value("prop", "") == "bialg";
      Field field = field_;
      if (cert.contains("field") && cert["field"].is_string())
        field = parse_field(cert["field"].get<std::string>());
      against = bialg ? parse_json(read_input(o_.against), o_.against)
                      : graph_json(o_.against, field);
    }
    auto verdict = certificate::verify(
        cert, against,
        gwb::EqualityCaps{std::max(o_.max_vertices, gwb::EqualityCaps{}.max_vertices)});
    Json report = {{"valid", verdict.ok},
                   {"claimed", cert.contains("width") ? cert["width"] : Json()},
                   {"width", verdict.width ? Json(*verdict.width) : Json()}};
    if (!verdict.ok) report["diagnostic"] = verdict.diagnostic;
    if (o_.format == "text") {
      emit(verdict.ok ? std::string("valid\n") : "invalid: " + verdict.diagnostic + "\n");
    } else {
      emit(report);
    }
    if (!verdict.ok) err << "mwd: invalid certificate: " << verdict.diagnostic << '\n';
    return verdict.ok ? ok : verification_failed;
  }

  int oracle() {
    std::string text = read_input(o_.in);
    Json input = looks_like_json(text) ? parse_json(text, o_.in) : Json();
    if (input.is_array() || (input.is_object() && input.contains("matrix"))) {
      Matrix f = certificate::matrix_from_input(input, field_);
      bialg::Dec d = bialg::best_decomposition(f);
      std::size_t budget = o_.budget ? o_.budget : bialg::width(d);
      auto w = bialg::mwd_oracle(f, budget);
      Json j = {{"kind", "oracle"},
                {"target", "matrix"},
                {"budget", budget},
                {"width", w ? Json(*w) : Json()},
                {"certificate", certificate::matrix(f, d)}};
      if (o_.format == "text") return emit((w ? std::to_string(*w) : "> " + std::to_string(budget)) + "\n");
      return emit(j);
    }
    DanglingGraph g = input.is_object() ? graph_from_json(input, field_) : graph_from_text(text, field_);
    std::size_t w = rwd_enumerate_oracle(g.adjacency);
    if (o_.format == "text") return emit(std::to_string(w) + "\n");
    RankWidthResult r = rwd_exact(g.adjacency, caps());
    return emit(Json{{"kind", "oracle"},
                     {"target", "graph"},
                     {"width", w},
                     {"certificate", certificate::rank(g, r.tree)}});
  }

  int random() {
    std::mt19937_64 rng(o_.seed);
    // Reduce raw draws ourselves: distribution objects differ between
    // standard libraries and would break byte-identical output.
    auto below = [&rng](std::uint64_t bound) { return bound ? rng() % bound : 0; };
    if (o_.density < 0 || o_.density > 1) throw UsageError("--density must lie in [0, 1]");
    const auto threshold = static_cast<std::uint64_t>(o_.density * 1000000.0);
    Json j;
    if (o_.kind == "graph") {
      DanglingGraph g(Matrix(field_, o_.vertices, o_.vertices),
                      Matrix(field_, o_.vertices, o_.ports));
      for (std::size_t u = 0; u < o_.vertices; ++u)
        for (std::size_t v = u + 1; v < o_.vertices; ++v)
          if (below(1000000) < threshold) g.adjacency.set(u, v, 1);
      for (std::size_t u = 0; u < o_.vertices; ++u)
        for (std::size_t p = 0; p < o_.ports; ++p)
          if (below(1000000) < threshold) g.boundary.set(u, p, 1);
      j = graph_to_json(g);
    } else if (o_.kind == "matrix") {
      if (o_.max_entry < 0) throw UsageError("--max-entry must be nonnegative");
      Matrix f(field_, o_.rows, o_.cols);
      const auto span = static_cast<std::uint64_t>(field_ == Field::gf2 ? 2 : o_.max_entry + 1);
      for (std::size_t i = 0; i < o_.rows; ++i)
        for (std::size_t c = 0; c < o_.cols; ++c) f.set(i, c, Rational(static_cast<long>(below(span))));
      j = {{"rows", f.rows()}, {"cols", f.cols()}, {"matrix", matrix_to_json(f)}};
    } else {
      throw UsageError("--kind must be graph or matrix");
    }
    j["seed"] = o_.seed;
    j["generator"] = "mt19937_64";
    if (o_.format == "text" && o_.kind == "graph") return emit(graph_to_text(graph_from_json(j, field_)));
    return emit(j);
  }

  int eval() {
    std::string text = o_.expr.empty() ? read_input(o_.in) : o_.expr;
    diagram::Expr e = diagram::parse(text);
    Json j = {{"expression", diagram::print(e)}, {"prop", o_.prop}, {"field", o_.field}};
    if (o_.prop == "bialg") {
      Matrix f = diagram::eval_matrix(e, field_);
      if (o_.format == "text") return emit(f.to_string() + "\n");
      j["value"] = {{"rows", f.rows()}, {"cols", f.cols()}, {"matrix", matrix_to_json(f)}};
    } else if (o_.prop == "grph") {
      gwb::BoundedGraph g = diagram::eval_graph(e, field_);
      j["value"] = gwb::graph_morphism_to_json(g);
    } else {
      throw UsageError("--prop must be bialg or grph");
    }
    return emit(j);
  }

 private:
  SolverCaps caps() const { return SolverCaps{o_.max_vertices}; }

  int emit(const Json& j) { return emit(j.dump(2) + "\n"); }
  int emit(const std::string& text) {
    if (o_.out.empty()) {
      out_ << text;
    } else {
      std::ofstream file(o_.out);
      if (!file) throw UsageError("cannot write " + o_.out);
      file << text;
    }
    return ok;
  }

  const Options& o_;
  std::ostream& out_;
  Field field_;
};

int fail(std::ostream& err, bool as_json, int code, const std::string& what) {
  if (as_json) {
    err << Json{{"error", what}, {"exit", code}}.dump() << '\n';
  } else {
    err << "mwd: " << what << '\n';
  }
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Rank width and monoidal width of graphs and matrices", "mwd"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--field", o.field, "gf2 or rational")->check(CLI::IsMember({"gf2", "rational"}));
  app.add_option("--format", o.format, "json, dot or text")
      ->check(CLI::IsMember({"json", "dot", "text"}));
  app.add_option("--seed", o.seed, "seed for the random generator");
  app.add_option("--max-vertices", o.max_vertices, "vertex cap of the exact solvers");
  app.add_option("--out", o.out, "write the result here instead of stdout");
  app.add_option("--in", o.in, "input file, or - for stdin");
  app.add_flag("--error-json", o.error_json, "report errors as JSON on stderr");

  auto* rankwidth = app.add_subcommand("rankwidth", "exact rank width with a witness tree");
  auto* rrwd = app.add_subcommand("rrwd", "exact recursive rank width");
  auto* mwd_matrix = app.add_subcommand("mwd-matrix", "monoidal decomposition of a matrix");
  auto* mwd_graph = app.add_subcommand("mwd-graph", "monoidal width bounds for a graph");
  auto* convert = app.add_subcommand("convert", "convert a certificate to another kind");
  convert->add_option("--to", o.to, "rank, recursive or monoidal")
      ->check(CLI::IsMember({"rank", "recursive", "monoidal"}));
  auto* verify = app.add_subcommand("verify", "check a certificate and its claimed width");
  verify->add_option("--against", o.against, "graph or matrix to check against");
  auto* oracle = app.add_subcommand("oracle", "exhaustive width search on tiny inputs");
  oracle->add_option("--budget", o.budget, "largest width to search (matrices)");
  auto* random = app.add_subcommand("random", "seeded random instance");
  random->add_option("--kind", o.kind, "graph or matrix")->check(CLI::IsMember({"graph", "matrix"}));
  random->add_option("--vertices", o.vertices);
  random->add_option("--ports", o.ports);
  random->add_option("--density", o.density, "edge probability");
  random->add_option("--rows", o.rows);
  random->add_option("--cols", o.cols);
  random->add_option("--max-entry", o.max_entry);
  auto* eval = app.add_subcommand("eval", "evaluate a string diagram expression");
  eval->add_option("--expr", o.expr, "expression text (otherwise read from --in)");
  eval->add_option("--prop", o.prop, "bialg or grph")->check(CLI::IsMember({"bialg", "grph"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    return fail(err, o.error_json, usage, e.what());
  }

  try {
    Runner r(o, out);
    if (*rankwidth) return r.rankwidth();
    if (*rrwd) return r.rrwd();
    if (*mwd_matrix) return r.mwd_matrix();
    if (*mwd_graph) return r.mwd_graph();
    if (*convert) return r.convert();
    if (*verify) return r.verify(err);
    if (*oracle) return r.oracle();
    if (*random) return r.random();
    if (*eval) return r.eval();
    return fail(err, o.error_json, usage, "no command");
  } catch (const CapExceeded& e) {
    return fail(err, o.error_json, cap_refused, e.what());
  } catch (const std::exception& e) {
    return fail(err, o.error_json, usage, e.what());
  }
}

}  // namespace mwd::cli
