#pragma once

// Seeded generators and brute-force oracles shared by the test suites. The
// oracles avoid the library's elimination code on purpose.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "mwd/gwb.hpp"
#include "mwd/matrix.hpp"
#include "mwd/rankdec.hpp"

namespace support {

using mwd::Field;
using mwd::Matrix;
using mwd::Rational;
using Rng = std::mt19937_64;

inline long draw(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline bool coin(Rng& rng, double p = 0.5) {
  return static_cast<double>(rng() % 1000000) < p * 1000000.0;
}

inline Matrix random_matrix(Rng& rng, Field field, std::size_t rows, std::size_t cols,
                            long max_entry = 3) {
  Matrix m(field, rows, cols);
  const long top = field == Field::gf2 ? 1 : max_entry;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, draw(rng, 0, top));
  return m;
}

/// Upper-triangular 0/1 representative of a random simple graph.
inline Matrix random_graph(Rng& rng, std::size_t n, double p = 0.5,
                           Field field = Field::gf2) {
  Matrix g(field, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng, p)) g.set(i, j, 1);
  return g;
}

inline mwd::DanglingGraph random_dangling(Rng& rng, std::size_t n, std::size_t ports,
                                          double p = 0.5) {
  return mwd::DanglingGraph(random_graph(rng, n, p),
                            random_matrix(rng, Field::gf2, n, ports));
}

inline mwd::Permutation random_permutation(Rng& rng, std::size_t n) {
  mwd::Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
  return p;
}

/// Random rooted binary tree over the given vertices.
inline mwd::Shape random_shape(Rng& rng, std::vector<mwd::Index> vertices) {
  if (vertices.empty()) return mwd::Shape::empty();
  if (vertices.size() == 1) return mwd::Shape::leaf(vertices[0]);
  for (std::size_t i = vertices.size(); i > 1; --i) std::swap(vertices[i - 1], vertices[rng() % i]);
  std::size_t cut = 1 + rng() % (vertices.size() - 1);
  std::vector<mwd::Index> left(vertices.begin(), vertices.begin() + static_cast<long>(cut));
  std::vector<mwd::Index> right(vertices.begin() + static_cast<long>(cut), vertices.end());
  return mwd::Shape::node(random_shape(rng, left), random_shape(rng, right));
}

inline std::vector<mwd::Index> all_vertices(std::size_t n) {
  std::vector<mwd::Index> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

/// Random morphism n → m of the graph prop with k vertices.
inline mwd::gwb::BoundedGraph random_bounded(Rng& rng, Field field, std::size_t n,
                                             std::size_t m, std::size_t k,
                                             long max_entry = 2) {
  Matrix G(field, k, k), F(field, m, m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) G.set(i, j, draw(rng, 0, field == Field::gf2 ? 1 : max_entry));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) F.set(i, j, draw(rng, 0, field == Field::gf2 ? 1 : max_entry));
  return mwd::gwb::BoundedGraph(G, random_matrix(rng, field, k, n, max_entry),
                                random_matrix(rng, field, k, m, max_entry),
                                random_matrix(rng, field, m, n, max_entry), F);
}

/// Entry-by-entry product.
inline Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Rational s = 0;
      for (std::size_t t = 0; t < a.cols(); ++t) s += a(i, t) * b(t, j);
      out.set(i, j, s);
    }
  return out;
}

/// GF(2) rank from the size of the row span, enumerated exhaustively.
inline std::size_t span_rank_gf2(const Matrix& a) {
  const Matrix& m = a.rows() <= a.cols() ? a : mwd::transpose(a);
  std::set<std::vector<int>> span;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.rows()); ++mask) {
    std::vector<int> v(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (mask >> i & 1)
        for (std::size_t j = 0; j < m.cols(); ++j) v[j] ^= m(i, j) != 0;
    span.insert(v);
  }
  std::size_t r = 0;
  while ((std::size_t{1} << r) < span.size()) ++r;
  return r;
}

/// Leibniz determinant.
inline Rational leibniz_det(const Matrix& a, const std::vector<std::size_t>& rows,
                            const std::vector<std::size_t>& cols) {
  std::vector<std::size_t> p(cols.size());
  std::iota(p.begin(), p.end(), 0);
  Rational det = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
    Rational term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < p.size(); ++i) term *= a(rows[i], cols[p[i]]);
    det += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

inline bool next_subset(std::vector<std::size_t>& s, std::size_t n) {
  std::size_t k = s.size();
  for (std::size_t i = k; i-- > 0;) {
    if (s[i] < n - k + i) {
      ++s[i];
      for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Rational rank as the order of the largest nonzero minor.
inline std::size_t minor_rank(const Matrix& a) {
  for (std::size_t k = std::min(a.rows(), a.cols()); k > 0; --k) {
    std::vector<std::size_t> rows(k);
    std::iota(rows.begin(), rows.end(), 0);
    do {
      std::vector<std::size_t> cols(k);
      std::iota(cols.begin(), cols.end(), 0);
      do {
        if (leibniz_det(a, rows, cols) != 0) return k;
      } while (next_subset(cols, a.cols()));
    } while (next_subset(rows, a.rows()));
  }
  return 0;
}

inline std::size_t oracle_rank(const Matrix& a) {
  return a.field() == Field::gf2 ? span_rank_gf2(a) : minor_rank(a);
}

}  // namespace support
