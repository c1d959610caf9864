#pragma once

// Exact dense matrices over GF(2) or the rationals.
//
// Every matrix carries its field. Entries are stored as GMP rationals in
// row-major order; in GF(2) mode they are kept normalised to 0/1 so that the
// same storage serves both fields. Zero-row and zero-column matrices are legal
// and stand for morphisms into or out of the monoidal unit.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mwd {

using Rational = mpq_class;
using Integer = mpz_class;

enum class Field { gf2, rational };

std::string_view to_string(Field field);
Field parse_field(std::string_view name);

/// Shape or field mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configurable size cap was exceeded; the operation refuses rather than
/// truncating its search.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Matrix {
 public:
  Matrix() : Matrix(Field::gf2, 0, 0) {}
  Matrix(Field field, std::size_t rows, std::size_t cols);

  static Matrix zero(Field field, std::size_t rows, std::size_t cols) {
    return Matrix(field, rows, cols);
  }
  static Matrix identity(Field field, std::size_t n);
  static Matrix from_rows(Field field,
                          std::initializer_list<std::initializer_list<long>> rows);
  static Matrix from_rows(Field field, const std::vector<std::vector<Rational>>& rows,
                          std::size_t cols_if_empty = 0);

  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  void set(std::size_t i, std::size_t j, const Rational& value);
  void add_to(std::size_t i, std::size_t j, const Rational& value);

  bool operator==(const Matrix& other) const;

  bool is_zero() const;
  bool is_integer() const;
  /// All entries are nonnegative integers (always true in GF(2) mode).
  bool is_natural() const;
  Rational max_entry() const;

  /// Same entries reinterpreted in another field (GF(2) reduces mod 2).
  Matrix in_field(Field field) const;

  std::string to_string() const;

 private:
  Rational normalise(const Rational& value) const;

  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> data_;
};

using Index = std::size_t;
/// perm[i] is the image of i.
using Permutation = std::vector<std::size_t>;

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix submatrix(const Matrix& a, std::span<const Index> rows, std::span<const Index> cols);
Matrix select_rows(const Matrix& a, std::span<const Index> rows);
Matrix select_cols(const Matrix& a, std::span<const Index> cols);

inline Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }
inline Matrix operator+(const Matrix& a, const Matrix& b) { return add(a, b); }

/// a + aᵀ; the canonical representative of the adjacency class [a].
Matrix symmetrize(const Matrix& a);
/// [g] = [h], i.e. g + gᵀ = h + hᵀ.
bool sym_class_equal(const Matrix& g, const Matrix& h);

/// Row i of m moves to row perm[i].
Matrix apply_permutation_rows(const Matrix& m, const Permutation& perm);
/// σ·g·σᵀ for the permutation matrix σ of perm.
Matrix conjugate_by_permutation(const Matrix& g, const Permutation& perm);
Permutation inverse_permutation(const Permutation& perm);

}  // namespace mwd
