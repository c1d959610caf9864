#pragma once

// Graphs with dangling edges: an adjacency class [G] on k vertices together
// with a k×n boundary matrix recording edges that leave through n ports.
// Simple graphs live over GF(2); multigraphs use the rationals.

#include <string>
#include <vector>

#include "mwd/io.hpp"
#include "mwd/matrix.hpp"

namespace mwd {

struct DanglingGraph {
  Matrix adjacency;  ///< k×k representative of [G]
  Matrix boundary;   ///< k×n

  DanglingGraph() = default;
  DanglingGraph(Matrix adjacency, Matrix boundary);
  /// No ports.
  explicit DanglingGraph(Matrix adjacency);

  std::size_t vertices() const { return adjacency.rows(); }
  std::size_t ports() const { return boundary.cols(); }
  Field field() const { return adjacency.field(); }
};

bool operator==(const DanglingGraph& a, const DanglingGraph& b);

/// X[i][j] = edges between part[i] and the j-th vertex outside part, read off
/// the symmetrised adjacency.
Matrix cut_matrix(const Matrix& adjacency, const std::vector<Index>& part);

/// Vertices not in part, increasing.
std::vector<Index> complement(std::size_t n, const std::vector<Index>& part);

Matrix complete_graph(std::size_t n, Field field = Field::gf2);
Matrix cycle_graph(std::size_t n, Field field = Field::gf2);
Matrix path_graph(std::size_t n, Field field = Field::gf2);
Matrix edgeless_graph(std::size_t n, Field field = Field::gf2);

// {"vertices": k, "edges": [[u, v, mult?], ...], "boundary": [[v, port, mult?], ...],
//  "ports": n?}; indices are 0-based.
Json graph_to_json(const DanglingGraph& g);
DanglingGraph graph_from_json(const Json& j, Field field);

// "p <k> <ports>", then "e u v [mult]" and "b u p [mult]" lines; '#' or 'c'
// starts a comment line.
std::string graph_to_text(const DanglingGraph& g);
DanglingGraph graph_from_text(const std::string& text, Field field);

}  // namespace mwd
