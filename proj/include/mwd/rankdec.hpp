#pragma once

// Rank decompositions (unrooted subcubic trees whose leaves are the vertices)
// and recursive rank decompositions (rooted binary vertex partitions of a
// graph with dangling edges). Recursive decompositions store only the graph
// and the shape; every node label is derived on demand.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mwd/graph.hpp"

namespace mwd {

struct RankDecTree {
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// leaf_of[v] is the tree node carrying graph vertex v.
  std::vector<std::size_t> leaf_of;

  /// Throws std::invalid_argument unless this is a subcubic tree whose
  /// leaves are in bijection with `vertices` graph vertices.
  void check(std::size_t vertices) const;
};

/// Vertex sets on the two sides of each tree edge (same order as edges);
/// the first set is the side of edges[i].first.
std::vector<std::pair<std::vector<Index>, std::vector<Index>>> edge_bipartitions(
    const RankDecTree& tree);

std::size_t rank_dec_width(const Matrix& adjacency, const RankDecTree& tree);

struct SolverCaps {
  std::size_t max_vertices = 12;
};

struct RankWidthResult {
  std::size_t width;
  RankDecTree tree;
};

/// Exact rank width by dynamic programming over vertex subsets.
RankWidthResult rwd_exact(const Matrix& adjacency, SolverCaps caps = {});

/// Exact rank width by enumerating every cubic tree on the vertices; at most
/// seven vertices.
std::size_t rwd_enumerate_oracle(const Matrix& adjacency);

/// Rooted binary tree over vertex indices. An empty shape has no vertices.
class Shape {
 public:
  static Shape empty() { return Shape(); }
  static Shape leaf(Index vertex);
  static Shape node(Shape left, Shape right);
  /// node(), except that empty children are dropped.
  static Shape join(Shape left, Shape right);

  bool is_empty() const { return !node_; }
  bool is_leaf() const { return node_ && !node_->left; }
  Index vertex() const { return node_->vertex; }
  const Shape& left() const { return *node_->left; }
  const Shape& right() const { return *node_->right; }

  /// Leaves left to right.
  std::vector<Index> vertices() const;
  /// Apply a vertex renaming to every leaf.
  Shape relabel(const std::vector<Index>& new_index) const;
  /// Subtree at a path of 'L'/'R' steps.
  const Shape& at(const std::string& path) const;

 private:
  struct Node {
    Index vertex = 0;
    std::shared_ptr<const Shape> left, right;
  };
  std::shared_ptr<const Node> node_;
};

struct RecRankDec {
  DanglingGraph graph;
  Shape shape;

  /// Throws std::invalid_argument unless the shape's leaves are exactly the
  /// graph's vertices, each once.
  void check() const;
};

/// Derived label of the subtree at path: the induced graph on its vertices
/// (in leaf order) with boundary (A | C) accumulated along the path.
DanglingGraph subtree_label(const RecRankDec& t, const std::string& path);

/// Largest boundary rank over all subtrees, root included.
std::size_t rec_width(const RecRankDec& t);

struct RecRankWidthResult {
  std::size_t width;
  RecRankDec decomposition;
};

RecRankWidthResult rrwd_exact(const DanglingGraph& g, SolverCaps caps = {});

/// Root the tree at the edge leaving the leaf of vertex 0 and smooth
/// degree-2 nodes. rec_width(result) ≤ rank_dec_width + rank(B).
RecRankDec to_recursive(const RankDecTree& tree, const DanglingGraph& g);

/// Forget labels and smooth the root into an edge.
RankDecTree to_rank_dec(const RecRankDec& t);

/// Both sides of rank(B′) = rank(A′ | C_Lᵀ | C_R) for the subtree at path:
/// the derived boundary rank, and the rank assembled from the blocks of the
/// root graph around the subtree.
std::pair<std::size_t, std::size_t> subtree_boundary_rank(const RecRankDec& t,
                                                         const std::string& path);

Json tree_to_json(const RankDecTree& tree);
RankDecTree tree_from_json(const Json& j);
Json shape_to_json(const Shape& s);
Shape shape_from_json(const Json& j);
Json rec_to_json(const RecRankDec& t);
RecRankDec rec_from_json(const Json& j, Field field);

std::string tree_to_dot(const RankDecTree& tree, const Matrix& adjacency);
std::string rec_to_dot(const RecRankDec& t);

}  // namespace mwd
