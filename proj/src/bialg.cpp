#include "mwd/bialg.hpp"

#include <algorithm>
#include <numeric>

#include "mwd/linalg.hpp"

namespace mwd::bialg {

std::string_view generator_name(Generator g) {
  switch (g) {
    case Generator::copy: return "copy";
    case Generator::discard: return "discard";
    case Generator::add: return "add";
    case Generator::zero: return "zero";
    case Generator::swap: return "swap";
    case Generator::id: return "id";
  }
  return "?";
}

std::optional<Generator> parse_generator(std::string_view name) {
  for (auto g : {Generator::copy, Generator::discard, Generator::add, Generator::zero,
                 Generator::swap, Generator::id}) {
    if (generator_name(g) == name) return g;
  }
  return std::nullopt;
}

Matrix generator_matrix(Generator g, Field field) {
  switch (g) {
    case Generator::copy: return Matrix::from_rows(field, {{1}, {1}});
    case Generator::discard: return Matrix(field, 0, 1);
    case Generator::add: return Matrix::from_rows(field, {{1, 1}});
    case Generator::zero: return Matrix(field, 1, 0);
    case Generator::swap: return Matrix::from_rows(field, {{0, 1}, {1, 0}});
    case Generator::id: return Matrix::identity(field, 1);
  }
  throw std::logic_error("unknown generator");
}

std::optional<Generator> as_generator(const Matrix& m) {
  for (auto g : {Generator::copy, Generator::discard, Generator::add, Generator::zero,
                 Generator::swap, Generator::id}) {
    if (generator_matrix(g, m.field()) == m) return g;
  }
  return std::nullopt;
}

std::size_t width(const Dec& d) { return mwd::width(d, MatrixProp{}); }

Matrix evaluate(const Dec& d) { return mwd::evaluate(d, MatrixProp{}); }

Validation validate(const Dec& d, const Matrix& f) {
  return mwd::validate(d, f, MatrixProp{f.field()});
}

std::size_t non_atomic_leaves(const Dec& d) {
  if (d.is_leaf()) return as_generator(d.as_leaf().morphism) ? 0 : 1;
  if (d.is_tensor()) return non_atomic_leaves(d.as_tensor().left) +
                            non_atomic_leaves(d.as_tensor().right);
  return non_atomic_leaves(d.as_compose().left) + non_atomic_leaves(d.as_compose().right);
}

Dec transpose(const Dec& d) {
  if (d.is_leaf()) return Dec::leaf(mwd::transpose(d.as_leaf().morphism));
  if (d.is_tensor()) {
    return Dec::tensor(transpose(d.as_tensor().left), transpose(d.as_tensor().right));
  }
  const auto& c = d.as_compose();
  return Dec::compose(transpose(c.right), c.cut, transpose(c.left));
}

namespace {

// Partial decompositions in which nullopt stands for id_0, the unit of both
// ⊗ and ;. Builders work on pieces and turn them into a Dec at the end.
using Piece = std::optional<Dec>;

Piece tensor(Piece a, Piece b) {
  if (!a) return b;
  if (!b) return a;
  return Dec::tensor(std::move(*a), std::move(*b));
}

Piece seq(Piece a, std::size_t cut, Piece b) {
  if (!a) return b;
  if (!b) return a;
  return Dec::compose(std::move(*a), cut, std::move(*b));
}

Dec leaf(Generator g, Field field) { return Dec::leaf(generator_matrix(g, field)); }

// id_0 = zero ; discard
Dec finish(Piece p, Field field) {
  if (p) return std::move(*p);
  return Dec::compose(leaf(Generator::zero, field), 1, leaf(Generator::discard, field));
}

Piece repeat(Generator g, std::size_t n, Field field) {
  Piece out;
  for (std::size_t i = 0; i < n; ++i) out = tensor(leaf(g, field), std::move(out));
  return out;
}

Piece identity(std::size_t n, Field field) { return repeat(Generator::id, n, field); }

std::pair<std::size_t, std::size_t> arity(const Dec& d) {
  if (d.is_leaf()) return {d.as_leaf().morphism.cols(), d.as_leaf().morphism.rows()};
  if (d.is_tensor()) {
    auto [n1, m1] = arity(d.as_tensor().left);
    auto [n2, m2] = arity(d.as_tensor().right);
    return {n1 + n2, m1 + m2};
  }
  return {arity(d.as_compose().left).first, arity(d.as_compose().right).second};
}

Piece scalar_piece(const Rational& k, Field field) {
  if (k == 0) return Dec::compose(leaf(Generator::discard, field), 0, leaf(Generator::zero, field));
  if (k == 1) return leaf(Generator::id, field);
  if (field == Field::gf2 || k.get_den() != 1 || k < 0) {
    Matrix m(field, 1, 1);
    m.set(0, 0, k);
    return Dec::leaf(m);  // outside the naturals: flagged, non-atomic
  }
  // 2 := copy ;2 add, and n+1 := copy ;2 (n ⊗ 1) ;2 add.
  Dec d = Dec::compose(leaf(Generator::copy, field), 2, leaf(Generator::add, field));
  for (Integer n = 2; n < k.get_num(); ++n) {
    d = Dec::compose(leaf(Generator::copy, field), 2,
                     Dec::compose(Dec::tensor(d, leaf(Generator::id, field)), 2,
                                  leaf(Generator::add, field)));
  }
  return d;
}

// a ↦ (a, r·a) : 1 → 2.
Dec spawn_accumulator(const Rational& r, Field field) {
  if (r == 0) return Dec::tensor(leaf(Generator::id, field), leaf(Generator::zero, field));
  if (r == 1) return leaf(Generator::copy, field);
  return Dec::compose(leaf(Generator::copy, field), 2,
                      Dec::tensor(leaf(Generator::id, field), *scalar_piece(r, field)));
}

// (s, b) ↦ (b, s + r·b) : 2 → 2, width ≤ 3.
Dec pass_accumulator(const Rational& r, Field field) {
  Dec swap = leaf(Generator::swap, field);
  if (r == 0) return swap;
  // (b, s) ↦ (b, b, s) ↦ (b, r·b + s)
  Dec scaled_add =
      r == 1 ? leaf(Generator::add, field)
             : Dec::compose(Dec::tensor(*scalar_piece(r, field), leaf(Generator::id, field)), 2,
                            leaf(Generator::add, field));
  Dec accumulate = Dec::compose(Dec::tensor(leaf(Generator::copy, field), leaf(Generator::id, field)),
                                3, Dec::tensor(leaf(Generator::id, field), scaled_add));
  return Dec::compose(swap, 2, accumulate);
}

// x ↦ (x, row·x) : n → n + 1. Every cut carries n + 1 wires; the running sum
// travels rightwards next to the input it is about to absorb.
Piece append_linear_form(const Matrix& row) {
  const Field field = row.field();
  const std::size_t n = row.cols();
  Piece out = tensor(spawn_accumulator(row(0, 0), field), identity(n - 1, field));
  for (std::size_t i = 1; i < n; ++i) {
    Piece layer = tensor(identity(i, field),
                         tensor(pass_accumulator(row(0, i), field), identity(n - 1 - i, field)));
    out = seq(std::move(out), n + 1, std::move(layer));
  }
  return out;
}

Piece bound_by_dims_piece(const Matrix& f) {
  const Field field = f.field();
  const std::size_t m = f.rows(), n = f.cols();
  if (m == 0) return repeat(Generator::discard, n, field);
  if (n == 0) return repeat(Generator::zero, m, field);
  if (m == 1 && n == 1) return scalar_piece(f(0, 0), field);
  if (m < n) {
    Piece dual = bound_by_dims_piece(mwd::transpose(f));
    return transpose(*dual);
  }
  // n ≤ m: peel the last output row.
  std::vector<Index> head(m - 1), last{m - 1};
  std::iota(head.begin(), head.end(), 0);
  const Matrix rest = select_rows(f, head);
  const Matrix row = select_rows(f, last);
  Piece rest_piece = bound_by_dims_piece(rest);
  if (row.is_zero()) return tensor(std::move(rest_piece), leaf(Generator::zero, field));
  return seq(append_linear_form(row), n + 1,
             tensor(std::move(rest_piece), leaf(Generator::id, field)));
}

Piece rank_piece(const Matrix& f) {
  const Field field = f.field();
  const std::size_t m = f.rows(), n = f.cols();
  if (m == n && f == Matrix::identity(field, n)) return identity(n, field);
  const std::size_t r = rank(f);
  if (r == std::min(m, n)) return bound_by_dims_piece(f);
  if (r == 0) {
    return seq(repeat(Generator::discard, n, field), 0, repeat(Generator::zero, m, field));
  }
  const auto factors = full_rank_factorization(f);
  return seq(bound_by_dims_piece(factors.right), r, bound_by_dims_piece(factors.left));
}

Piece discard_piece(const Dec& d, const std::vector<bool>& mask) {
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) return d;
  if (d.is_leaf()) {
    const Matrix& g = d.as_leaf().morphism;
    std::vector<Index> kept;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (!mask[i]) kept.push_back(i);
    const Matrix h = select_rows(g, kept);
    if (h.rows() == 0) return repeat(Generator::discard, h.cols(), h.field());
    if (!as_generator(g)) return Dec::leaf(h);
    // Generator followed by discards: a tiny matrix with a tensor of
    // generator leaves as decomposition, never heavier than g itself.
    Piece replacement;
    for (const auto& factor : tensor_factorize(h)) {
      replacement = tensor(std::move(replacement), rank_piece(factor));
    }
    if (replacement && width(*replacement) > MatrixProp{}.atom_weight(g)) {
      throw std::logic_error("discard rewrite increased the width of a generator");
    }
    return replacement;
  }
  if (d.is_tensor()) {
    const auto& t = d.as_tensor();
    const std::size_t split = arity(t.left).second;
    std::vector<bool> left(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(split));
    std::vector<bool> right(mask.begin() + static_cast<std::ptrdiff_t>(split), mask.end());
    return tensor(discard_piece(t.left, left), discard_piece(t.right, right));
  }
  const auto& c = d.as_compose();
  return seq(c.left, c.cut, discard_piece(c.right, mask));
}

Field field_of(const Dec& d) {
  if (d.is_leaf()) return d.as_leaf().morphism.field();
  if (d.is_tensor()) return field_of(d.as_tensor().left);
  return field_of(d.as_compose().left);
}

}  // namespace

Dec scalar_decomposition(const Rational& k, Field field) {
  return finish(scalar_piece(k, field), field);
}

Dec copy_decomposition(std::size_t n, Field field) {
  if (n == 0) throw std::invalid_argument("copy_decomposition: n must be positive");
  if (n == 1) return leaf(Generator::copy, field);
  // γ(n, m) : n + m → n + m + n sends (x, y) to (x, y, x). Peel x₁:
  //   γ(n, m) = (copy ⊗ id) ;_{n+m+1} (id₁ ⊗ (move x₁ past x', y) ;_{n+m} γ(n-1, m+1))
  // so every cut stays at n + m + 1 = (original n) + 1.
  auto move_first_to_end = [&](std::size_t wires) -> Piece {
    // (a, z₁..z_{w-1}) ↦ (z₁..z_{w-1}, a)
    Piece out;
    for (std::size_t i = 0; i + 1 < wires; ++i) {
      Piece layer = tensor(identity(i, field),
                           tensor(leaf(Generator::swap, field), identity(wires - i - 2, field)));
      out = seq(std::move(out), wires, std::move(layer));
    }
    return out;
  };
  std::function<Piece(std::size_t, std::size_t)> gamma = [&](std::size_t k,
                                                              std::size_t m) -> Piece {
    if (k == 0) return identity(m, field);
    // After copying x₁, reorder (x₁', x', y) into (x', y, x₁') so that the
    // smaller γ(k-1, m+1) treats x₁' as part of the passive block.
    Piece head = tensor(leaf(Generator::copy, field), identity(k - 1 + m, field));
    Piece inner = seq(move_first_to_end(k + m), k + m, gamma(k - 1, m + 1));
    return seq(std::move(head), k + m + 1, tensor(leaf(Generator::id, field), std::move(inner)));
  };
  return finish(gamma(n, 0), field);
}

Dec bound_by_dims(const Matrix& f) { return finish(bound_by_dims_piece(f), f.field()); }

Dec rank_decomposition_of_matrix(const Matrix& f) { return finish(rank_piece(f), f.field()); }

std::vector<Matrix> tensor_factorize(const Matrix& f) {
  std::vector<Matrix> factors;
  Matrix rest = f;
  while (rest.rows() > 0 || rest.cols() > 0) {
    const std::size_t m = rest.rows(), n = rest.cols();
    bool split = false;
    for (std::size_t i = 0; i <= m && !split; ++i) {
      for (std::size_t j = 0; j <= n && !split; ++j) {
        if ((i == 0 && j == 0) || (i == m && j == n)) continue;
        bool ok = true;
        for (std::size_t a = 0; a < i && ok; ++a)
          for (std::size_t b = j; b < n && ok; ++b) ok = rest(a, b) == 0;
        for (std::size_t a = i; a < m && ok; ++a)
          for (std::size_t b = 0; b < j && ok; ++b) ok = rest(a, b) == 0;
        if (!ok) continue;
        std::vector<Index> top(i), bottom(m - i), left(j), right(n - j);
        std::iota(top.begin(), top.end(), 0);
        std::iota(bottom.begin(), bottom.end(), i);
        std::iota(left.begin(), left.end(), 0);
        std::iota(right.begin(), right.end(), j);
        factors.push_back(submatrix(rest, top, left));
        rest = submatrix(rest, bottom, right);
        split = true;
      }
    }
    if (!split) {
      factors.push_back(rest);
      break;
    }
  }
  return factors;
}

Dec best_decomposition(const Matrix& f) {
  const auto factors = tensor_factorize(f);
  Piece out;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    out = tensor(rank_piece(*it), std::move(out));
  }
  return finish(std::move(out), f.field());
}

Dec discard_outputs(const Dec& d, const std::vector<bool>& mask) {
  if (mask.size() != arity(d).second) {
    throw std::invalid_argument("discard_outputs: mask length differs from the codomain");
  }
  return finish(discard_piece(d, mask), field_of(d));
}

Dec zero_inputs(const Dec& d, const std::vector<bool>& mask) {
  return transpose(discard_outputs(transpose(d), mask));
}

Dec discard_transform(const Dec& d, std::size_t k) {
  const std::size_t m = arity(d).second;
  if (k > m) throw std::out_of_range("discard_transform: k exceeds the codomain");
  std::vector<bool> mask(m, false);
  std::fill(mask.end() - static_cast<std::ptrdiff_t>(k), mask.end(), true);
  return discard_outputs(d, mask);
}

Dec zero_transform(const Dec& d, std::size_t k) {
  const std::size_t n = arity(d).first;
  if (k > n) throw std::out_of_range("zero_transform: k exceeds the domain");
  std::vector<bool> mask(n, false);
  std::fill(mask.end() - static_cast<std::ptrdiff_t>(k), mask.end(), true);
  return zero_inputs(d, mask);
}

Dec tensor_root_transform(const Dec& d, const Matrix& f1, const Matrix& f2) {
  if (!d.is_compose()) throw std::invalid_argument("tensor_root_transform: root is not a composition");
  if (!(evaluate(d) == direct_sum(f1, f2))) {
    throw std::invalid_argument("tensor_root_transform: decomposition does not evaluate to f1 ⊗ f2");
  }
  const Field field = f1.field();
  const std::size_t r1 = rank(f1), r2 = rank(f2);
  if (r1 > 0 && r2 > 0) {
    // rank f1 + rank f2 ≤ cut ≤ wd(d) and max(r1, r2) + 1 ≤ r1 + r2.
    return Dec::tensor(rank_decomposition_of_matrix(f1), rank_decomposition_of_matrix(f2));
  }
  // A rank-0 factor is all discards and zeros; the other factor is cut out of
  // d itself by discarding and zeroing the wires of its partner.
  const std::size_t n1 = f1.cols(), m1 = f1.rows(), n2 = f2.cols(), m2 = f2.rows();
  std::vector<bool> outputs(m1 + m2, false), inputs(n1 + n2, false);
  if (r1 == 0) {
    std::fill(outputs.begin(), outputs.begin() + static_cast<std::ptrdiff_t>(m1), true);
    std::fill(inputs.begin(), inputs.begin() + static_cast<std::ptrdiff_t>(n1), true);
  } else {
    std::fill(outputs.begin() + static_cast<std::ptrdiff_t>(m1), outputs.end(), true);
    std::fill(inputs.begin() + static_cast<std::ptrdiff_t>(n1), inputs.end(), true);
  }
  Piece carved = transpose(discard_outputs(transpose(discard_outputs(d, outputs)), inputs));
  Piece zero_part = rank_piece(r1 == 0 ? f1 : f2);
  Piece out = r1 == 0 ? tensor(std::move(zero_part), std::move(carved))
                      : tensor(std::move(carved), std::move(zero_part));
  return finish(std::move(out), field);
}

Json leaf_to_json(const Matrix& m) {
  if (auto g = as_generator(m)) return std::string(generator_name(*g));
  Json j = {{"matrix", matrix_to_json(m)}};
  if (m.rows() == 0) j["cols"] = m.cols();
  return j;
}

Matrix leaf_from_json(const Json& j, Field field) {
  if (j.is_string()) {
    auto g = parse_generator(j.get<std::string>());
    if (!g) throw std::invalid_argument("unknown generator '" + j.get<std::string>() + "'");
    return generator_matrix(*g, field);
  }
  if (j.is_object() && j.contains("matrix")) {
    return matrix_from_json(j.at("matrix"), field, j.value("cols", std::size_t{0}));
  }
  throw std::invalid_argument("leaf must be a generator name or {\"matrix\": [...]}");
}

Json to_json(const Dec& d) { return decomposition_to_json(d, leaf_to_json); }

Dec from_json(const Json& j, Field field) {
  return decomposition_from_json<Matrix>(j, [field](const Json& leaf) {
    return leaf_from_json(leaf, field);
  });
}

std::string to_dot(const Dec& d) {
  return decomposition_to_dot(d, [](const Matrix& m) {
    if (auto g = as_generator(m)) return std::string(generator_name(*g));
    return m.to_string();
  });
}

}  // namespace mwd::bialg
