#pragma once

// The prop of matrices. A morphism n → m is an m×n matrix; composition
// f ; g is the product g·f and the monoidal product is the direct sum.
//
// Atoms are the six generators copy, discard, add, zero, swap and id, each
// weighing max{dom, cod}. Constructions that have to leave the naturals in
// rational mode emit plain-matrix leaves, which are not atoms: such a
// certificate still has the claimed width but fails validation, and
// non_atomic_leaves() reports how many leaves leaked.

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mwd/decomposition.hpp"
#include "mwd/io.hpp"
#include "mwd/matrix.hpp"

namespace mwd::bialg {

enum class Generator { copy, discard, add, zero, swap, id };

std::string_view generator_name(Generator g);
std::optional<Generator> parse_generator(std::string_view name);
Matrix generator_matrix(Generator g, Field field);
std::optional<Generator> as_generator(const Matrix& m);

struct MatrixProp {
  using Morphism = Matrix;
  Field field = Field::gf2;

  std::size_t dom(const Matrix& f) const { return f.cols(); }
  std::size_t cod(const Matrix& f) const { return f.rows(); }
  Matrix compose(const Matrix& f, const Matrix& g) const { return multiply(g, f); }
  Matrix tensor(const Matrix& f, const Matrix& g) const { return direct_sum(f, g); }
  bool equal(const Matrix& f, const Matrix& g) const { return f == g; }
  bool is_atom(const Matrix& f) const { return as_generator(f).has_value(); }
  std::size_t atom_weight(const Matrix& f) const { return std::max(f.rows(), f.cols()); }
  std::size_t object_weight(std::size_t n) const { return n; }
};

using Dec = Decomposition<Matrix>;

std::size_t width(const Dec& d);
Matrix evaluate(const Dec& d);
Validation validate(const Dec& d, const Matrix& f);
std::size_t non_atomic_leaves(const Dec& d);

/// The mirror-image decomposition of fᵀ: copy↔add, discard↔zero, and every
/// composition reversed. Width is unchanged.
Dec transpose(const Dec& d);

/// [k] : 1 → 1 with width ≤ 2 (the copy;add diamond chain).
Dec scalar_decomposition(const Rational& k, Field field);

/// The n-fold coherent copy n → 2n, width ≤ n + 1.
Dec copy_decomposition(std::size_t n, Field field);

/// Any f : n → m with width ≤ min{m, n} + 1.
Dec bound_by_dims(const Matrix& f);

/// f factored through rank(f) wires, width ≤ rank(f) + 1.
Dec rank_decomposition_of_matrix(const Matrix& f);

/// Finest contiguous ⊗-factorization. Zero-arity factors come out
/// consumer before producer (discard before zero).
std::vector<Matrix> tensor_factorize(const Matrix& f);

/// Tensor of rank decompositions of the ⊗-factors; width ≤ max rank + 1.
Dec best_decomposition(const Matrix& f);

/// d ; (id_{m-k} ⊗ discard_k) without increasing width.
Dec discard_transform(const Dec& d, std::size_t k);
/// (id_{n-k} ⊗ zero_k) ; d without increasing width.
Dec zero_transform(const Dec& d, std::size_t k);
/// Discard the outputs flagged in mask (one flag per output wire).
Dec discard_outputs(const Dec& d, const std::vector<bool>& mask);
/// Feed zero into the inputs flagged in mask.
Dec zero_inputs(const Dec& d, const std::vector<bool>& mask);

/// Given a composition-rooted d of f1 ⊗ f2, a tensor-rooted decomposition of
/// the same morphism no wider than d.
Dec tensor_root_transform(const Dec& d, const Matrix& f1, const Matrix& f2);

struct OracleCaps {
  std::size_t max_dim_rational = 3;
  long max_entry = 3;
  std::size_t max_dim_gf2 = 4;
  /// Accept validated constructions as proofs of decomposability. Lower
  /// bounds are unaffected; turn off for a search that never consults them.
  bool use_constructions = true;
};

/// Exact monoidal width by iterative deepening, or nullopt above the budget.
/// Throws CapExceeded outside the caps.
std::optional<std::size_t> mwd_oracle(const Matrix& f, std::size_t width_budget,
                                      OracleCaps caps = {});

/// The same search with its memo kept between queries, for sweeps over many
/// matrices of one field. Not thread-safe.
class WidthOracle {
 public:
  explicit WidthOracle(Field field, OracleCaps caps = {});
  ~WidthOracle();
  WidthOracle(const WidthOracle&) = delete;
  WidthOracle& operator=(const WidthOracle&) = delete;

  std::optional<std::size_t> width(const Matrix& f, std::size_t width_budget);

 private:
  class Search;
  Field field_;
  OracleCaps caps_;
  std::unique_ptr<Search> search_;
};

Json leaf_to_json(const Matrix& m);
Matrix leaf_from_json(const Json& j, Field field);
Json to_json(const Dec& d);
Dec from_json(const Json& j, Field field);
std::string to_dot(const Dec& d);

}  // namespace mwd::bialg
