#include "mwd/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>

namespace mwd {

namespace {

// GF(2) rank on packed rows.
std::size_t rank_gf2(const Matrix& a) {
  const std::size_t words = (a.cols() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(a.rows(), std::vector<std::uint64_t>(words));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) rows[i][j / 64] |= std::uint64_t{1} << (j % 64);

  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < rows.size(); ++col) {
    const std::size_t w = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t p = r;
    while (p < rows.size() && !(rows[p][w] & bit)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][w] & bit)
        for (std::size_t k = w; k < words; ++k) rows[i][k] ^= rows[r][k];
    }
    ++r;
  }
  return r;
}

// Fraction-free elimination: every division by the previous pivot is exact,
// so entries stay integral minors of the input.
std::size_t rank_bareiss(const Matrix& a) {
  std::vector<std::vector<Integer>> m(a.rows(), std::vector<Integer>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j).get_num();

  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < m.size(); ++col) {
    std::size_t p = r;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      for (std::size_t j = col + 1; j < a.cols(); ++j) {
        m[i][j] = m[r][col] * m[i][j] - m[i][col] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][col] = 0;
    }
    prev = m[r][col];
    ++r;
  }
  return r;
}

}  // namespace

EchelonForm reduced_row_echelon(const Matrix& a) {
  Matrix m = a;
  std::vector<Index> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    std::size_t p = r;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        Rational tmp = m(r, j);
        m.set(r, j, m(p, j));
        m.set(p, j, tmp);
      }
    }
    const Rational pivot = m(r, col);
    for (std::size_t j = 0; j < m.cols(); ++j) m.set(r, j, m(r, j) / pivot);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, col) == 0) continue;
      const Rational factor = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, m(i, j) - factor * m(r, j));
    }
    pivots.push_back(col);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  if (a.field() == Field::gf2) return rank_gf2(a);
  if (a.is_integer()) return rank_bareiss(a);
  return reduced_row_echelon(a).pivots.size();
}

std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("inverse: matrix is not square");
  const std::size_t n = a.rows();
  auto ech = reduced_row_echelon(hstack(a, Matrix::identity(a.field(), n)));
  if (ech.pivots.size() < n || (n > 0 && ech.pivots[n - 1] >= n)) return std::nullopt;
  std::vector<Index> rows(n), cols(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), n);
  return submatrix(ech.reduced, rows, cols);
}

Matrix left_inverse(const Matrix& a) {
  // Invert the square block on a maximal set of independent rows and scatter
  // it back into those columns.
  const auto independent_rows = reduced_row_echelon(transpose(a)).pivots;
  if (independent_rows.size() != a.cols()) {
    throw std::invalid_argument("left_inverse: matrix does not have full column rank");
  }
  const auto block_inverse = inverse(select_rows(a, independent_rows));
  Matrix out(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t k = 0; k < independent_rows.size(); ++k)
      out.set(i, independent_rows[k], (*block_inverse)(i, k));
  return out;
}

RankFactorization full_rank_factorization(const Matrix& a) {
  const Field f = a.field();
  const std::size_t r = rank(a);
  if (r == 0) return {Matrix(f, a.rows(), 0), Matrix(f, 0, a.cols()), true};
  if (r == a.cols()) return {a, Matrix::identity(f, r), a.is_natural()};
  if (r == a.rows()) return {Matrix::identity(f, r), a, a.is_natural()};

  // Column basis: a = a[:, pivots] · rref(a).
  auto ech = reduced_row_echelon(a);
  std::vector<Index> basis_rows(r);
  std::iota(basis_rows.begin(), basis_rows.end(), 0);
  RankFactorization by_columns{select_cols(a, ech.pivots), select_rows(ech.reduced, basis_rows),
                               false};
  by_columns.natural = by_columns.left.is_natural() && by_columns.right.is_natural();
  if (by_columns.natural) return by_columns;

  // Row basis: a = rref(aᵀ)ᵀ · a[pivots', :].
  auto ech_t = reduced_row_echelon(transpose(a));
  RankFactorization by_rows{transpose(select_rows(ech_t.reduced, basis_rows)),
                            select_rows(a, ech_t.pivots), false};
  by_rows.natural = by_rows.left.is_natural() && by_rows.right.is_natural();
  return by_rows.natural ? by_rows : by_columns;
}

CoupledFactorization coupled_rank_factorization(const Matrix& a1, const Matrix& a2,
                                                const Matrix& c) {
  if (a1.rows() != c.rows() || a2.rows() != c.cols()) {
    throw DimensionError("coupled_rank_factorization: need rows(a1) = rows(c) and "
                         "rows(a2) = cols(c)");
  }
  const auto first = full_rank_factorization(hstack(a1, c));
  const auto second = full_rank_factorization(hstack(a2, transpose(c)));
  const std::size_t r1 = first.left.cols();
  const std::size_t r2 = second.left.cols();

  std::vector<Index> a1_cols(a1.cols()), a2_cols(a2.cols());
  std::iota(a1_cols.begin(), a1_cols.end(), 0);
  std::iota(a2_cols.begin(), a2_cols.end(), 0);
  Matrix n1 = select_cols(first.right, a1_cols);
  Matrix n2 = select_cols(second.right, a2_cols);

  // l1 · core · l2ᵀ = c, solvable since col(c) ⊆ col(l1) and row(c) ⊆ row(l2ᵀ).
  Matrix core = Matrix(a1.field(), r1, r2);
  if (r1 > 0 && r2 > 0) {
    core = left_inverse(first.left) * c * transpose(left_inverse(second.left));
  }
  const bool natural = first.left.is_natural() && n1.is_natural() &&
                       second.left.is_natural() && n2.is_natural() && core.is_natural();
  return {first.left, std::move(n1), second.left, std::move(n2), std::move(core), natural};
}

namespace {

// Exact search for a minimum decomposition of a natural matrix into a sum of
// rank-one nonnegative integer matrices u·vᵀ.
class NatFactorSearch {
 public:
  using Entries = std::vector<long>;

  NatFactorSearch(const Matrix& a) : rows_(a.rows()), cols_(a.cols()) {
    Entries target(rows_ * cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) target[i * cols_ + j] = a(i, j).get_num().get_si();
    target_ = target;
    enumerate_rank_one();
  }

  bool decomposable(std::size_t k) { return search(target_, k); }

 private:
  void enumerate_rank_one() {
    const long bound = target_.empty() ? 0 : *std::max_element(target_.begin(), target_.end());
    std::set<Entries> seen;
    Entries u(rows_, 0);
    // Odometer over u ∈ [0, bound]^rows.
    while (true) {
      std::size_t pos = 0;
      while (pos < rows_ && u[pos] == bound) u[pos++] = 0;
      if (pos == rows_) break;
      ++u[pos];
      // Largest admissible v_j given u.
      std::vector<long> v_max(cols_, bound);
      for (std::size_t i = 0; i < rows_; ++i)
        if (u[i] > 0)
          for (std::size_t j = 0; j < cols_; ++j)
            v_max[j] = std::min(v_max[j], target_[i * cols_ + j] / u[i]);
      Entries v(cols_, 0);
      while (true) {
        std::size_t q = 0;
        while (q < cols_ && v[q] == v_max[q]) v[q++] = 0;
        if (q == cols_) break;
        ++v[q];
        Entries product(rows_ * cols_);
        for (std::size_t i = 0; i < rows_; ++i)
          for (std::size_t j = 0; j < cols_; ++j) product[i * cols_ + j] = u[i] * v[j];
        if (seen.insert(product).second) components_.push_back(std::move(product));
      }
    }
  }

  std::size_t rational_rank(const Entries& e) const {
    Matrix m(Field::rational, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m.set(i, j, Rational(e[i * cols_ + j]));
    return rank(m);
  }

  bool search(const Entries& remaining, std::size_t k) {
    auto first = std::find_if(remaining.begin(), remaining.end(), [](long x) { return x != 0; });
    if (first == remaining.end()) return true;
    if (k == 0 || rational_rank(remaining) > k) return false;
    if (failed_.count({remaining, k})) return false;
    const auto cell = static_cast<std::size_t>(first - remaining.begin());
    // Some component must cover the first nonzero cell.
    for (const auto& comp : components_) {
      if (comp[cell] == 0) continue;
      bool fits = true;
      for (std::size_t t = 0; t < comp.size() && fits; ++t) fits = comp[t] <= remaining[t];
      if (!fits) continue;
      Entries next = remaining;
      for (std::size_t t = 0; t < comp.size(); ++t) next[t] -= comp[t];
      if (search(next, k - 1)) return true;
    }
    failed_.insert({remaining, k});
    return false;
  }

  std::size_t rows_, cols_;
  Entries target_;
  std::vector<Entries> components_;
  std::set<std::pair<Entries, std::size_t>> failed_;
};

}  // namespace

std::optional<std::size_t> min_nat_factor_rank(const Matrix& a, std::size_t k_max,
                                               NatFactorCaps caps) {
  if (a.field() != Field::rational) {
    throw std::invalid_argument("min_nat_factor_rank: requires rational mode");
  }
  if (!a.is_natural()) {
    throw std::invalid_argument("min_nat_factor_rank: entries must be nonnegative integers");
  }
  if (a.rows() > caps.max_dim || a.cols() > caps.max_dim) {
    throw CapExceeded("min_nat_factor_rank: dimensions exceed cap " +
                      std::to_string(caps.max_dim));
  }
  if (a.max_entry() > caps.max_entry) {
    throw CapExceeded("min_nat_factor_rank: entries exceed cap " +
                      std::to_string(caps.max_entry));
  }
  NatFactorSearch search(a);
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (search.decomposable(k)) return k;
  }
  return std::nullopt;
}

}  // namespace mwd
