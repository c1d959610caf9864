#pragma once

// The prop of graphs with boundaries. A morphism n → m is
//   g = ([G], L, R, P, [F])
// with k internal vertices: G (k×k) the internal edges, L (k×n) and R (k×m)
// the edges from vertices to the left and right ports, P (m×n) the wires
// passing straight through, and F (m×m) edges between right ports. Two
// morphisms are equal when some vertex permutation carries one to the other.
//
// Every morphism is an atom and weighs its vertex count; cuts weigh their
// arity.

#include <optional>
#include <string>

#include "mwd/decomposition.hpp"
#include "mwd/graph.hpp"
#include "mwd/rankdec.hpp"

namespace mwd::gwb {

struct BoundedGraph {
  std::size_t n = 0;  ///< left arity (domain)
  std::size_t m = 0;  ///< right arity (codomain)
  Matrix G, L, R, P, F;

  BoundedGraph() = default;
  /// Checks every shape against n, m and the vertex count k = rows(G).
  BoundedGraph(Matrix G, Matrix L, Matrix R, Matrix P, Matrix F);

  std::size_t vertices() const { return G.rows(); }
  Field field() const { return G.field(); }
};

BoundedGraph compose(const BoundedGraph& g, const BoundedGraph& h);
BoundedGraph tensor(const BoundedGraph& g, const BoundedGraph& h);

BoundedGraph identity(std::size_t n, Field field);
/// A plain matrix as a vertexless morphism: P = a, F = 0.
BoundedGraph embed(const Matrix& a);
/// ∪ : 0 → 2, one edge between the two right ports.
BoundedGraph cup(Field field);
/// ∪ₙ : 0 → 2n, port i joined to port n + i.
BoundedGraph cup(std::size_t n, Field field);
/// ν : 1 → 0, a vertex hanging off its single port.
BoundedGraph vertex(Field field);

/// Rename vertices: vertex i becomes perm[i].
BoundedGraph permute_vertices(const BoundedGraph& g, const Permutation& perm);

struct EqualityCaps {
  std::size_t max_vertices = 10;
};

/// Some perm with permute_vertices(g, perm) identical to h up to adjacency
/// class, or nullopt. Throws CapExceeded above the vertex cap.
std::optional<Permutation> find_isomorphism(const BoundedGraph& g, const BoundedGraph& h,
                                            EqualityCaps caps = {});
bool equal(const BoundedGraph& g, const BoundedGraph& h, EqualityCaps caps = {});
/// Not exact: compares arities, P, [F] and multisets of vertex invariants.
/// Usable above the cap; a true answer is only evidence of equality.
bool invariants_match(const BoundedGraph& g, const BoundedGraph& h);

/// A graph with dangling edges as a morphism n → 0 with L = B.
BoundedGraph from_dangling(const DanglingGraph& g);
/// ([G], (L | R)).
DanglingGraph to_dangling(const BoundedGraph& g);

std::size_t weight(const BoundedGraph& g);

struct GraphProp {
  using Morphism = BoundedGraph;
  EqualityCaps caps{};

  std::size_t dom(const BoundedGraph& g) const { return g.n; }
  std::size_t cod(const BoundedGraph& g) const { return g.m; }
  BoundedGraph compose(const BoundedGraph& f, const BoundedGraph& g) const {
    return gwb::compose(f, g);
  }
  BoundedGraph tensor(const BoundedGraph& f, const BoundedGraph& g) const {
    return gwb::tensor(f, g);
  }
  bool equal(const BoundedGraph& f, const BoundedGraph& g) const { return gwb::equal(f, g, caps); }
  bool is_atom(const BoundedGraph&) const { return true; }
  std::size_t atom_weight(const BoundedGraph& g) const { return weight(g); }
  std::size_t object_weight(std::size_t n) const { return n; }
};

using Dec = Decomposition<BoundedGraph>;

std::size_t width(const Dec& d);
BoundedGraph evaluate(const Dec& d);
/// Throws CapExceeded when g has more vertices than equality can handle.
Validation validate(const Dec& d, const BoundedGraph& g, EqualityCaps caps = {});

/// Thrown when a construction needs exact factorizations inside the
/// category and the field cannot provide them.
class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A decomposition of from_dangling(t.graph) with single-vertex leaves and
/// width ≤ max(1, 2·rec_width(t)). GF(2) only.
Dec rank_to_monoidal(const RecRankDec& t);

/// Same shape over ([G], B·M). With full_rank, M must have full row rank
/// and the width is preserved; otherwise it can only drop. Throws
/// std::logic_error if the width relation fails.
RecRankDec rebase_boundary(const RecRankDec& t, const Matrix& M, bool full_rank);

/// For t over ([G], (L | R)) with L the first rows(F) boundary columns:
/// same shape over ([G + L·F·Lᵀ], (L | R + L·(F + Fᵀ)·Pᵀ)). Throws
/// std::logic_error if the width grows.
RecRankDec absorb_feedback(const RecRankDec& t, const Matrix& F, const Matrix& P);

/// A recursive decomposition of to_dangling(g) built from a certificate d
/// of g, with rec_width ≤ 2·max(width(d), rank L, rank R).
RecRankDec monoidal_to_rank(const Dec& d, const BoundedGraph& g);

struct GraphWidthBounds {
  Rational lower;       ///< rwd / 2
  std::size_t upper;    ///< width of the certificate
  std::size_t rank_width;
  RecRankDec recursive;
  Dec certificate;
};

/// Bounds on the monoidal width of the graph state ([G], (), (), (), ()).
GraphWidthBounds mwd_graph_bounds(const Matrix& adjacency, SolverCaps caps = {});

Json graph_morphism_to_json(const BoundedGraph& g);
BoundedGraph graph_morphism_from_json(const Json& j, Field field);
Json leaf_to_json(const BoundedGraph& g);
BoundedGraph leaf_from_json(const Json& j, Field field);
Json to_json(const Dec& d);
Dec from_json(const Json& j, Field field);
std::string to_dot(const Dec& d);

}  // namespace mwd::gwb
