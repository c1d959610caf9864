#pragma once

// Rank, echelon forms and rank factorizations over the matrix's own field.

#include <optional>
#include <vector>

#include "mwd/matrix.hpp"

namespace mwd {

std::size_t rank(const Matrix& a);

struct EchelonForm {
  Matrix reduced;               ///< reduced row echelon form, same shape as the input
  std::vector<Index> pivots;    ///< pivot column of each nonzero row
};
EchelonForm reduced_row_echelon(const Matrix& a);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<Matrix> inverse(const Matrix& a);

/// Some x with x·a = I. Requires full column rank.
Matrix left_inverse(const Matrix& a);

struct RankFactorization {
  Matrix left;   ///< rows(a) × rank, full column rank
  Matrix right;  ///< rank × cols(a), full row rank
  bool natural;  ///< both factors have nonnegative integer entries
};

/// a = left · right with inner dimension rank(a). In rational mode the
/// factorization prefers nonnegative-integer factors when an easy one exists.
RankFactorization full_rank_factorization(const Matrix& a);

/// Paired factorizations sharing a core:
///   (a1 | c)  = l1 · (n1 | core · l2ᵀ)
///   (a2 | cᵀ) = l2 · (n2 | coreᵀ · l1ᵀ)
/// with inner dimensions rank(a1 | c) and rank(a2 | cᵀ).
struct CoupledFactorization {
  Matrix l1, n1, l2, n2, core;
  bool natural;
};
CoupledFactorization coupled_rank_factorization(const Matrix& a1, const Matrix& a2,
                                                const Matrix& c);

struct NatFactorCaps {
  std::size_t max_dim = 4;
  long max_entry = 3;
};

/// Least k <= k_max such that a = b·c with b, c nonnegative integer matrices
/// of inner dimension k; nullopt when none exists up to k_max. Rational mode
/// and natural entries only. Throws CapExceeded outside the caps.
std::optional<std::size_t> min_nat_factor_rank(const Matrix& a, std::size_t k_max,
                                               NatFactorCaps caps = {});

}  // namespace mwd
