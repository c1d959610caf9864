#include "mwd/graph.hpp"

#include <sstream>

namespace mwd {

DanglingGraph::DanglingGraph(Matrix adjacency_, Matrix boundary_)
    : adjacency(std::move(adjacency_)), boundary(std::move(boundary_)) {
  if (adjacency.rows() != adjacency.cols()) {
    throw DimensionError("adjacency must be square, got " + std::to_string(adjacency.rows()) +
                         "x" + std::to_string(adjacency.cols()));
  }
  if (boundary.rows() != adjacency.rows()) {
    throw DimensionError("boundary has " + std::to_string(boundary.rows()) + " rows for " +
                         std::to_string(adjacency.rows()) + " vertices");
  }
  if (boundary.field() != adjacency.field()) throw DimensionError("field mismatch");
}

DanglingGraph::DanglingGraph(Matrix adjacency_)
    : DanglingGraph(adjacency_, Matrix(adjacency_.field(), adjacency_.rows(), 0)) {}

bool operator==(const DanglingGraph& a, const DanglingGraph& b) {
  return a.vertices() == b.vertices() && sym_class_equal(a.adjacency, b.adjacency) &&
         a.boundary == b.boundary;
}

std::vector<Index> complement(std::size_t n, const std::vector<Index>& part) {
  std::vector<bool> in(n, false);
  for (auto v : part) {
    if (v >= n) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
    in[v] = true;
  }
  std::vector<Index> out;
  for (std::size_t v = 0; v < n; ++v)
    if (!in[v]) out.push_back(v);
  return out;
}

Matrix cut_matrix(const Matrix& adjacency, const std::vector<Index>& part) {
  const auto rest = complement(adjacency.rows(), part);
  return submatrix(symmetrize(adjacency), part, rest);
}

Matrix complete_graph(std::size_t n, Field field) {
  Matrix g(field, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.set(i, j, 1);
  return g;
}

Matrix cycle_graph(std::size_t n, Field field) {
  Matrix g = path_graph(n, field);
  if (n >= 3) g.set(0, n - 1, 1);
  return g;
}

Matrix path_graph(std::size_t n, Field field) {
  Matrix g(field, n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.set(i, i + 1, 1);
  return g;
}

Matrix edgeless_graph(std::size_t n, Field field) { return Matrix(field, n, n); }

namespace {

Rational edge_multiplicity(const Matrix& g, std::size_t u, std::size_t v) {
  return u == v ? g(u, u) : Rational(g(u, v) + g(v, u));
}

void add_edge(Matrix& g, std::size_t u, std::size_t v, const Rational& mult) {
  if (u >= g.rows() || v >= g.rows()) {
    throw std::out_of_range("edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") out of range");
  }
  g.add_to(std::min(u, v), std::max(u, v), mult);
}

void add_dangling(Matrix& b, std::size_t u, std::size_t p, const Rational& mult) {
  if (u >= b.rows() || p >= b.cols()) {
    throw std::out_of_range("boundary entry (" + std::to_string(u) + "," + std::to_string(p) +
                            ") out of range");
  }
  b.add_to(u, p, mult);
}

}  // namespace

Json graph_to_json(const DanglingGraph& g) {
  Json edges = Json::array();
  for (std::size_t u = 0; u < g.vertices(); ++u) {
    for (std::size_t v = u; v < g.vertices(); ++v) {
      const Rational m = edge_multiplicity(g.adjacency, u, v);
      if (m == 0) continue;
      Json e = {u, v};
      if (m != 1) e.push_back(scalar_to_json(m));
      edges.push_back(std::move(e));
    }
  }
  Json boundary = Json::array();
  for (std::size_t u = 0; u < g.vertices(); ++u) {
    for (std::size_t p = 0; p < g.ports(); ++p) {
      const Rational& m = g.boundary(u, p);
      if (m == 0) continue;
      Json e = {u, p};
      if (m != 1) e.push_back(scalar_to_json(m));
      boundary.push_back(std::move(e));
    }
  }
  return {{"vertices", g.vertices()},
          {"ports", g.ports()},
          {"edges", std::move(edges)},
          {"boundary", std::move(boundary)}};
}

DanglingGraph graph_from_json(const Json& j, Field field) {
  if (!j.is_object()) throw std::invalid_argument("graph must be a JSON object");
  const auto k = j.at("vertices").get<std::size_t>();
  std::size_t ports = 0;
  if (j.contains("ports")) {
    ports = j.at("ports").get<std::size_t>();
  } else if (j.contains("boundary")) {
    for (const auto& e : j.at("boundary")) ports = std::max(ports, e.at(1).get<std::size_t>() + 1);
  }
  Matrix g(field, k, k), b(field, k, ports);
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) {
        throw std::invalid_argument("edge must be [u, v] or [u, v, mult]");
      }
      add_edge(g, e[0].get<std::size_t>(), e[1].get<std::size_t>(),
               e.size() == 3 ? scalar_from_json(e[2]) : Rational(1));
    }
  }
  if (j.contains("boundary")) {
    for (const auto& e : j.at("boundary")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) {
        throw std::invalid_argument("boundary entry must be [v, port] or [v, port, mult]");
      }
      add_dangling(b, e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                   e.size() == 3 ? scalar_from_json(e[2]) : Rational(1));
    }
  }
  return DanglingGraph(std::move(g), std::move(b));
}

std::string graph_to_text(const DanglingGraph& g) {
  std::ostringstream out;
  out << "p " << g.vertices() << ' ' << g.ports() << '\n';
  for (std::size_t u = 0; u < g.vertices(); ++u) {
    for (std::size_t v = u; v < g.vertices(); ++v) {
      const Rational m = edge_multiplicity(g.adjacency, u, v);
      if (m == 0) continue;
      out << "e " << u << ' ' << v;
      if (m != 1) out << ' ' << m.get_str();
      out << '\n';
    }
  }
  for (std::size_t u = 0; u < g.vertices(); ++u) {
    for (std::size_t p = 0; p < g.ports(); ++p) {
      const Rational& m = g.boundary(u, p);
      if (m == 0) continue;
      out << "b " << u << ' ' << p;
      if (m != 1) out << ' ' << m.get_str();
      out << '\n';
    }
  }
  return out.str();
}

DanglingGraph graph_from_text(const std::string& text, Field field) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  Matrix g, b;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag[0] == '#' || tag == "c") continue;
    if (tag == "p") {
      std::size_t k = 0, ports = 0;
      if (have_header) fail("duplicate header");
      if (!(fields >> k >> ports)) fail("expected 'p <vertices> <ports>'");
      g = Matrix(field, k, k);
      b = Matrix(field, k, ports);
      have_header = true;
      continue;
    }
    if (!have_header) fail("missing 'p' header");
    std::size_t u = 0, v = 0;
    if (!(fields >> u >> v)) fail("expected two indices");
    std::string mult_text;
    Rational mult(1);
    if (fields >> mult_text) {
      try {
        mult = Rational(mult_text, 10);
      } catch (const std::invalid_argument&) {
        fail("bad multiplicity '" + mult_text + "'");
      }
    }
    try {
      if (tag == "e") {
        add_edge(g, u, v, mult);
      } else if (tag == "b") {
        add_dangling(b, u, v, mult);
      } else {
        fail("unknown line kind '" + tag + "'");
      }
    } catch (const std::out_of_range& e) {
      fail(e.what());
    }
  }
  if (!have_header) throw std::invalid_argument("missing 'p' header");
  return DanglingGraph(std::move(g), std::move(b));
}

}  // namespace mwd
