#include "mwd/rankdec.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "mwd/linalg.hpp"

namespace mwd {

// ---------------------------------------------------------------------------
// Unrooted trees

namespace {

std::vector<std::vector<std::size_t>> neighbours(const RankDecTree& tree) {
  std::vector<std::vector<std::size_t>> adj(tree.nodes);
  for (auto [a, b] : tree.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> vertex_of_node(const RankDecTree& tree) {
  std::vector<std::size_t> out(tree.nodes, kNone);
  for (std::size_t v = 0; v < tree.leaf_of.size(); ++v) out[tree.leaf_of[v]] = v;
  return out;
}

}  // namespace

void RankDecTree::check(std::size_t vertices) const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("rank decomposition: " + what); };
  if (leaf_of.size() != vertices) {
    fail("maps " + std::to_string(leaf_of.size()) + " vertices, graph has " +
         std::to_string(vertices));
  }
  if (vertices == 0) {
    if (nodes != 0 || !edges.empty()) fail("a graph without vertices has the empty tree");
    return;
  }
  if (nodes == 0 || edges.size() != nodes - 1) fail("not a tree (edge count)");
  for (auto [a, b] : edges) {
    if (a >= nodes || b >= nodes || a == b) fail("bad edge");
  }
  const auto adj = neighbours(*this);
  std::vector<bool> seen(nodes, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto w : adj[u]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != nodes) fail("not connected");
  std::vector<bool> is_image(nodes, false);
  for (auto node : leaf_of) {
    if (node >= nodes) fail("leaf index out of range");
    if (is_image[node]) fail("two vertices share a leaf");
    is_image[node] = true;
  }
  for (std::size_t u = 0; u < nodes; ++u) {
    if (adj[u].size() > 3) fail("node " + std::to_string(u) + " has degree above 3");
    const bool leaf = nodes == 1 || adj[u].size() == 1;
    if (leaf != is_image[u]) fail("leaves and vertices are not in bijection");
  }
}

std::vector<std::pair<std::vector<Index>, std::vector<Index>>> edge_bipartitions(
    const RankDecTree& tree) {
  const auto adj = neighbours(tree);
  const auto vertex = vertex_of_node(tree);
  std::vector<std::pair<std::vector<Index>, std::vector<Index>>> out;
  for (auto [a, b] : tree.edges) {
    std::vector<Index> side;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{a, b}};
    while (!stack.empty()) {
      auto [u, from] = stack.back();
      stack.pop_back();
      if (vertex[u] != kNone) side.push_back(vertex[u]);
      for (auto w : adj[u])
        if (w != from) stack.emplace_back(w, u);
    }
    std::sort(side.begin(), side.end());
    out.emplace_back(side, complement(tree.leaf_of.size(), side));
  }
  return out;
}

std::size_t rank_dec_width(const Matrix& adjacency, const RankDecTree& tree) {
  tree.check(adjacency.rows());
  std::size_t w = 0;
  for (const auto& [side, rest] : edge_bipartitions(tree)) {
    w = std::max(w, rank(cut_matrix(adjacency, side)));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Shapes

Shape Shape::leaf(Index vertex) {
  Shape s;
  s.node_ = std::make_shared<const Node>(Node{vertex, nullptr, nullptr});
  return s;
}

Shape Shape::node(Shape left, Shape right) {
  if (left.is_empty() || right.is_empty()) {
    throw std::invalid_argument("shape nodes need two non-empty children");
  }
  Shape s;
  s.node_ = std::make_shared<const Node>(Node{0, std::make_shared<const Shape>(std::move(left)),
                                             std::make_shared<const Shape>(std::move(right))});
  return s;
}

Shape Shape::join(Shape left, Shape right) {
  if (left.is_empty()) return right;
  if (right.is_empty()) return left;
  return node(std::move(left), std::move(right));
}

std::vector<Index> Shape::vertices() const {
  std::vector<Index> out;
  std::function<void(const Shape&)> walk = [&](const Shape& s) {
    if (s.is_empty()) return;
    if (s.is_leaf()) {
      out.push_back(s.vertex());
      return;
    }
    walk(s.left());
    walk(s.right());
  };
  walk(*this);
  return out;
}

Shape Shape::relabel(const std::vector<Index>& new_index) const {
  if (is_empty()) return *this;
  if (is_leaf()) return leaf(new_index.at(vertex()));
  return node(left().relabel(new_index), right().relabel(new_index));
}

const Shape& Shape::at(const std::string& path) const {
  const Shape* s = this;
  for (char step : path) {
    if (s->is_empty() || s->is_leaf()) throw std::invalid_argument("path '" + path + "' leaves the tree");
    if (step == 'L') {
      s = &s->left();
    } else if (step == 'R') {
      s = &s->right();
    } else {
      throw std::invalid_argument("path steps are 'L' or 'R', got '" + std::string(1, step) + "'");
    }
  }
  return *s;
}

// ---------------------------------------------------------------------------
// Recursive decompositions

void RecRankDec::check() const {
  auto vs = shape.vertices();
  std::sort(vs.begin(), vs.end());
  std::vector<Index> want(graph.vertices());
  std::iota(want.begin(), want.end(), 0);
  if (vs != want) {
    throw std::invalid_argument("recursive decomposition: shape leaves must be the graph's " +
                                std::to_string(graph.vertices()) + " vertices, each once");
  }
}

namespace {

// Child boundaries of a node whose leaves (in order) are `vs` with boundary
// rows `b` aligned to `vs`: B₁ = (A₁ | C), B₂ = (A₂ | Cᵀ).
std::pair<Matrix, Matrix> child_boundaries(const Matrix& sym, const Shape& s, const Matrix& b) {
  const auto v1 = s.left().vertices();
  const auto v2 = s.right().vertices();
  std::vector<Index> top(v1.size()), bottom(v2.size());
  std::iota(top.begin(), top.end(), 0);
  std::iota(bottom.begin(), bottom.end(), v1.size());
  const Matrix c = submatrix(sym, v1, v2);
  return {hstack(select_rows(b, top), c), hstack(select_rows(b, bottom), transpose(c))};
}

Matrix ordered_boundary(const RecRankDec& t) {
  return select_rows(t.graph.boundary, t.shape.vertices());
}

std::size_t width_below(const Matrix& sym, const Shape& s, const Matrix& b) {
  std::size_t w = rank(b);
  if (s.is_empty() || s.is_leaf()) return w;
  auto [b1, b2] = child_boundaries(sym, s, b);
  return std::max({w, width_below(sym, s.left(), b1), width_below(sym, s.right(), b2)});
}

}  // namespace

DanglingGraph subtree_label(const RecRankDec& t, const std::string& path) {
  t.check();
  const Matrix sym = symmetrize(t.graph.adjacency);
  const Shape* s = &t.shape;
  Matrix b = ordered_boundary(t);
  for (char step : path) {
    const Shape& child = s->at(std::string(1, step));
    auto [b1, b2] = child_boundaries(sym, *s, b);
    b = step == 'L' ? b1 : b2;
    s = &child;
  }
  const auto vs = s->vertices();
  return DanglingGraph(submatrix(t.graph.adjacency, vs, vs), b);
}

std::size_t rec_width(const RecRankDec& t) {
  t.check();
  return width_below(symmetrize(t.graph.adjacency), t.shape, ordered_boundary(t));
}

std::pair<std::size_t, std::size_t> subtree_boundary_rank(const RecRankDec& t,
                                                         const std::string& path) {
  const std::size_t derived = rank(subtree_label(t, path).boundary);
  const auto all = t.shape.vertices();
  const auto inner = t.shape.at(path).vertices();
  std::size_t start = 0;
  if (!inner.empty()) {
    start = static_cast<std::size_t>(std::find(all.begin(), all.end(), inner.front()) - all.begin());
  }
  const std::vector<Index> left(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(start));
  const std::vector<Index> right(all.begin() + static_cast<std::ptrdiff_t>(start + inner.size()),
                                 all.end());
  const Matrix sym = symmetrize(t.graph.adjacency);
  const Matrix assembled = hstack(hstack(select_rows(t.graph.boundary, inner),
                                         submatrix(sym, inner, left)),
                                  submatrix(sym, inner, right));
  return {derived, rank(assembled)};
}

// ---------------------------------------------------------------------------
// Exact solvers

namespace {

std::vector<Index> mask_vertices(std::uint32_t mask) {
  std::vector<Index> out;
  for (Index v = 0; mask; ++v, mask >>= 1)
    if (mask & 1) out.push_back(v);
  return out;
}

// best(S) = max(rank of S's boundary, min over S = S₁ ⊎ S₂ of max(best S₁, best S₂)).
RecRankWidthResult subset_dp(const DanglingGraph& g, SolverCaps caps) {
  const std::size_t n = g.vertices();
  if (n > caps.max_vertices || n > 24) {
    throw CapExceeded("exact solver is capped at " + std::to_string(caps.max_vertices) +
                      " vertices, graph has " + std::to_string(n));
  }
  if (n == 0) return {rank(g.boundary), RecRankDec{g, Shape::empty()}};
  const Matrix sym = symmetrize(g.adjacency);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<std::size_t> best(full + 1, 0);
  std::vector<std::uint32_t> choice(full + 1, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const auto part = mask_vertices(s);
    const Matrix boundary = hstack(select_rows(g.boundary, part),
                                   submatrix(sym, part, complement(n, part)));
    const std::size_t own = rank(boundary);
    if (std::popcount(s) == 1) {
      best[s] = own;
      continue;
    }
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t rest = s ^ low;
    std::size_t split_cost = std::numeric_limits<std::size_t>::max();
    // S₁ contains the lowest vertex; S₂ must be non-empty.
    for (std::uint32_t sub = 0;; sub = (sub - rest) & rest) {
      const std::uint32_t s1 = low | sub;
      const std::uint32_t s2 = s ^ s1;
      if (s2 != 0) {
        const std::size_t c = std::max(best[s1], best[s2]);
        if (c < split_cost) {
          split_cost = c;
          choice[s] = s1;
        }
      }
      if (sub == rest) break;
    }
    best[s] = std::max(own, split_cost);
  }
  std::function<Shape(std::uint32_t)> build = [&](std::uint32_t s) {
    if (std::popcount(s) == 1) return Shape::leaf(static_cast<Index>(std::countr_zero(s)));
    return Shape::node(build(choice[s]), build(s ^ choice[s]));
  };
  return {best[full], RecRankDec{g, build(full)}};
}

}  // namespace

RecRankWidthResult rrwd_exact(const DanglingGraph& g, SolverCaps caps) {
  return subset_dp(g, caps);
}

RankWidthResult rwd_exact(const Matrix& adjacency, SolverCaps caps) {
  auto r = subset_dp(DanglingGraph(adjacency), caps);
  if (adjacency.rows() == 0) return {0, RankDecTree{}};
  return {r.width, to_rank_dec(r.decomposition)};
}

std::size_t rwd_enumerate_oracle(const Matrix& adjacency) {
  const std::size_t n = adjacency.rows();
  if (n > 7) throw CapExceeded("enumeration oracle is capped at 7 vertices");
  if (n <= 1) return 0;
  std::vector<std::size_t> cut_rank(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < cut_rank.size(); ++s) {
    cut_rank[s] = rank(cut_matrix(adjacency, mask_vertices(s)));
  }
  if (n == 2) return cut_rank[1];

  // Nodes 0..n-1 are the leaves; internal nodes follow. Start from the star
  // on three leaves and insert each further leaf into every edge.
  using Edges = std::vector<std::pair<std::size_t, std::size_t>>;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  auto evaluate = [&](const Edges& edges, std::size_t node_count) {
    std::vector<std::vector<std::size_t>> adj(node_count);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::size_t w = 0;
    for (auto [a, b] : edges) {
      std::uint32_t side = 0;
      std::vector<std::pair<std::size_t, std::size_t>> stack{{a, b}};
      while (!stack.empty()) {
        auto [u, from] = stack.back();
        stack.pop_back();
        if (u < n) side |= std::uint32_t{1} << u;
        for (auto x : adj[u])
          if (x != from) stack.emplace_back(x, u);
      }
      w = std::max(w, cut_rank[side]);
      if (w >= best) return;
    }
    best = w;
  };
  std::function<void(Edges&, std::size_t, std::size_t)> grow = [&](Edges& edges,
                                                                  std::size_t next_leaf,
                                                                  std::size_t node_count) {
    if (next_leaf == n) {
      evaluate(edges, node_count);
      return;
    }
    const std::size_t count = edges.size();
    for (std::size_t e = 0; e < count; ++e) {
      const auto [a, b] = edges[e];
      const std::size_t w = node_count;
      edges[e] = {a, w};
      edges.emplace_back(w, b);
      edges.emplace_back(w, next_leaf);
      grow(edges, next_leaf + 1, node_count + 1);
      edges.pop_back();
      edges.pop_back();
      edges[e] = {a, b};
    }
  };
  Edges star{{0, n}, {1, n}, {2, n}};
  grow(star, 3, n + 1);
  return best;
}

// ---------------------------------------------------------------------------
// Translations

RecRankDec to_recursive(const RankDecTree& tree, const DanglingGraph& g) {
  tree.check(g.vertices());
  if (g.vertices() == 0) return {g, Shape::empty()};
  if (g.vertices() == 1) return {g, Shape::leaf(0)};
  const auto adj = neighbours(tree);
  const auto vertex = vertex_of_node(tree);
  std::function<Shape(std::size_t, std::size_t)> hang = [&](std::size_t u, std::size_t parent) {
    std::vector<std::size_t> children;
    for (auto w : adj[u])
      if (w != parent) children.push_back(w);
    if (children.empty()) return Shape::leaf(vertex[u]);
    if (children.size() == 1) return hang(children[0], u);
    return Shape::node(hang(children[0], u), hang(children[1], u));
  };
  const std::size_t anchor = tree.leaf_of[0];
  return {g, Shape::node(Shape::leaf(0), hang(adj[anchor].front(), anchor))};
}

RankDecTree to_rank_dec(const RecRankDec& t) {
  t.check();
  if (t.shape.is_empty()) throw std::invalid_argument("to_rank_dec: graph has no vertices");
  RankDecTree tree;
  tree.leaf_of.assign(t.graph.vertices(), 0);
  std::function<std::size_t(const Shape&)> emit = [&](const Shape& s) {
    const std::size_t id = tree.nodes++;
    if (s.is_leaf()) {
      tree.leaf_of[s.vertex()] = id;
      return id;
    }
    const std::size_t l = emit(s.left());
    const std::size_t r = emit(s.right());
    tree.edges.emplace_back(id, l);
    tree.edges.emplace_back(id, r);
    return id;
  };
  if (t.shape.is_leaf()) {
    emit(t.shape);
    return tree;
  }
  const std::size_t l = emit(t.shape.left());
  const std::size_t r = emit(t.shape.right());
  tree.edges.emplace_back(l, r);
  return tree;
}

// ---------------------------------------------------------------------------
// Serialisation

Json tree_to_json(const RankDecTree& tree) {
  Json edges = Json::array();
  for (auto [a, b] : tree.edges) edges.push_back({a, b});
  return {{"nodes", tree.nodes}, {"edges", std::move(edges)}, {"leaves", tree.leaf_of}};
}

RankDecTree tree_from_json(const Json& j) {
  RankDecTree tree;
  tree.nodes = j.at("nodes").get<std::size_t>();
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("tree edge must be [a, b]");
    tree.edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  tree.leaf_of = j.at("leaves").get<std::vector<std::size_t>>();
  return tree;
}

Json shape_to_json(const Shape& s) {
  if (s.is_empty()) return nullptr;
  if (s.is_leaf()) return s.vertex();
  return Json::array({shape_to_json(s.left()), shape_to_json(s.right())});
}

Shape shape_from_json(const Json& j) {
  if (j.is_null()) return Shape::empty();
  if (j.is_number_unsigned() || j.is_number_integer()) {
    if (j.get<long long>() < 0) throw std::invalid_argument("vertex index must be nonnegative");
    return Shape::leaf(j.get<std::size_t>());
  }
  if (j.is_array() && j.size() == 2) return Shape::node(shape_from_json(j[0]), shape_from_json(j[1]));
  throw std::invalid_argument("shape must be a vertex index, a pair, or null");
}

Json rec_to_json(const RecRankDec& t) {
  return {{"graph", graph_to_json(t.graph)}, {"shape", shape_to_json(t.shape)}};
}

RecRankDec rec_from_json(const Json& j, Field field) {
  RecRankDec t{graph_from_json(j.at("graph"), field), shape_from_json(j.at("shape"))};
  t.check();
  return t;
}

std::string tree_to_dot(const RankDecTree& tree, const Matrix& adjacency) {
  const auto vertex = vertex_of_node(tree);
  const auto sides = edge_bipartitions(tree);
  std::ostringstream out;
  out << "graph rank_decomposition {\n";
  for (std::size_t u = 0; u < tree.nodes; ++u) {
    if (vertex[u] != kNone) {
      out << "  n" << u << " [label=\"v" << vertex[u] << "\", shape=box];\n";
    } else {
      out << "  n" << u << " [label=\"\", shape=point];\n";
    }
  }
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    out << "  n" << tree.edges[e].first << " -- n" << tree.edges[e].second << " [label=\""
        << rank(cut_matrix(adjacency, sides[e].first)) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string rec_to_dot(const RecRankDec& t) {
  t.check();
  const Matrix sym = symmetrize(t.graph.adjacency);
  std::ostringstream out;
  out << "digraph recursive_rank_decomposition {\n";
  std::size_t next = 0;
  std::function<std::size_t(const Shape&, const Matrix&)> emit = [&](const Shape& s,
                                                                     const Matrix& b) {
    const std::size_t id = next++;
    if (s.is_empty()) {
      out << "  n" << id << " [label=\"()\"];\n";
      return id;
    }
    if (s.is_leaf()) {
      out << "  n" << id << " [label=\"v" << s.vertex() << "\", shape=box];\n";
      return id;
    }
    out << "  n" << id << " [label=\"\", shape=point];\n";
    auto [b1, b2] = child_boundaries(sym, s, b);
    const std::size_t l = emit(s.left(), b1);
    const std::size_t r = emit(s.right(), b2);
    out << "  n" << id << " -> n" << l << " [label=\"" << rank(b1) << "\"];\n";
    out << "  n" << id << " -> n" << r << " [label=\"" << rank(b2) << "\"];\n";
    return id;
  };
  const Matrix b = ordered_boundary(t);
  const std::size_t root = emit(t.shape, b);
  out << "  root [shape=none, label=\"rank " << rank(b) << "\"];\n  root -> n" << root << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace mwd
