#include "mwd/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace mwd {

std::string_view to_string(Field field) {
  return field == Field::gf2 ? "gf2" : "rational";
}

Field parse_field(std::string_view name) {
  if (name == "gf2") return Field::gf2;
  if (name == "rational" || name == "rat") return Field::rational;
  throw std::invalid_argument("unknown field '" + std::string(name) +
                              "' (expected gf2 or rational)");
}

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_field(const Matrix& a, const Matrix& b, const char* op) {
  if (a.field() != b.field()) {
    throw DimensionError(std::string(op) + ": operands live in different fields");
  }
}

}  // namespace

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

Matrix Matrix::from_rows(Field field,
                         std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Rational>> values;
  for (const auto& row : rows) {
    values.emplace_back();
    for (long v : row) values.back().emplace_back(v);
  }
  return from_rows(field, values);
}

Matrix Matrix::from_rows(Field field, const std::vector<std::vector<Rational>>& rows,
                         std::size_t cols_if_empty) {
  const std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Rational Matrix::normalise(const Rational& value) const {
  if (field_ == Field::rational) return value;
  // p/q with q odd is p·q⁻¹ = p (mod 2).
  if (mpz_even_p(value.get_den_mpz_t())) {
    throw std::domain_error("value " + value.get_str() + " has no image in GF(2)");
  }
  return Rational(mpz_odd_p(value.get_num_mpz_t()) ? 1 : 0);
}

void Matrix::set(std::size_t i, std::size_t j, const Rational& value) {
  data_[i * cols_ + j] = normalise(value);
}

void Matrix::add_to(std::size_t i, std::size_t j, const Rational& value) {
  data_[i * cols_ + j] = normalise(data_[i * cols_ + j] + value);
}

bool Matrix::operator==(const Matrix& other) const {
  return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ &&
         data_ == other.data_;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
}

bool Matrix::is_integer() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Rational& x) { return x.get_den() == 1; });
}

bool Matrix::is_natural() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Rational& x) { return x.get_den() == 1 && x >= 0; });
}

Rational Matrix::max_entry() const {
  Rational best = 0;
  for (const auto& x : data_) best = std::max(best, x);
  return best;
}

Matrix Matrix::in_field(Field field) const {
  Matrix m(field, rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = m.normalise(data_[k]);
  return m;
}

std::string Matrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? "," : "") << (*this)(i, j).get_str();
    out << ']';
  }
  out << ']';
  if (rows_ == 0 || cols_ == 0) out << " (" << shape(*this) << ")";
  return out.str();
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  require_same_field(a, b, "multiply");
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: cannot multiply " + shape(a) + " by " + shape(b));
  }
  Matrix c(a.field(), a.rows(), b.cols());
  Rational acc;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k) != 0 && b(k, j) != 0) acc += a(i, k) * b(k, j);
      }
      c.set(i, j, acc);
    }
  }
  return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_field(a, b, "add");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("add: shapes " + shape(a) + " and " + shape(b) + " differ");
  }
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.add_to(i, j, b(i, j));
  return c;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  require_same_field(a, b, "direct_sum");
  Matrix c(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.set(i, j, a(i, j));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c.set(a.rows() + i, a.cols() + j, b(i, j));
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t.set(j, i, a(i, j));
  return t;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  require_same_field(a, b, "hstack");
  if (a.rows() != b.rows()) {
    throw DimensionError("hstack: row counts differ (" + shape(a) + " | " + shape(b) + ")");
  }
  Matrix c(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c.set(i, j, a(i, j));
    for (std::size_t j = 0; j < b.cols(); ++j) c.set(i, a.cols() + j, b(i, j));
  }
  return c;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  require_same_field(a, b, "vstack");
  if (a.cols() != b.cols()) {
    throw DimensionError("vstack: column counts differ (" + shape(a) + " over " + shape(b) +
                         ")");
  }
  Matrix c(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) c.set(i, j, a(i, j));
    for (std::size_t i = 0; i < b.rows(); ++i) c.set(a.rows() + i, j, b(i, j));
  }
  return c;
}

Matrix submatrix(const Matrix& a, std::span<const Index> rows, std::span<const Index> cols) {
  for (Index i : rows)
    if (i >= a.rows()) throw std::out_of_range("submatrix: row index out of range");
  for (Index j : cols)
    if (j >= a.cols()) throw std::out_of_range("submatrix: column index out of range");
  Matrix s(a.field(), rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s.set(i, j, a(rows[i], cols[j]));
  return s;
}

Matrix select_rows(const Matrix& a, std::span<const Index> rows) {
  std::vector<Index> all(a.cols());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return submatrix(a, rows, all);
}

Matrix select_cols(const Matrix& a, std::span<const Index> cols) {
  std::vector<Index> all(a.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return submatrix(a, all, cols);
}

Matrix symmetrize(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("symmetrize: matrix is not square");
  return add(a, transpose(a));
}

bool sym_class_equal(const Matrix& g, const Matrix& h) {
  if (g.rows() != g.cols() || h.rows() != h.cols() || g.rows() != h.rows()) {
    throw DimensionError("sym_class_equal: need square matrices of equal size, got " +
                         shape(g) + " and " + shape(h));
  }
  return symmetrize(g) == symmetrize(h);
}

namespace {

void check_permutation(const Permutation& perm, std::size_t n) {
  if (perm.size() != n) {
    throw DimensionError("permutation of size " + std::to_string(perm.size()) +
                         " applied to dimension " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw std::invalid_argument("not a permutation");
    seen[p] = true;
  }
}

}  // namespace

Matrix apply_permutation_rows(const Matrix& m, const Permutation& perm) {
  check_permutation(perm, m.rows());
  Matrix out(m.field(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.set(perm[i], j, m(i, j));
  return out;
}

Matrix conjugate_by_permutation(const Matrix& g, const Permutation& perm) {
  if (g.rows() != g.cols()) throw DimensionError("conjugate_by_permutation: not square");
  check_permutation(perm, g.rows());
  Matrix out(g.field(), g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) out.set(perm[i], perm[j], g(i, j));
  return out;
}

Permutation inverse_permutation(const Permutation& perm) {
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv.at(perm[i]) = i;
  return inv;
}

}  // namespace mwd
