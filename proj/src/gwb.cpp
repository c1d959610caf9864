#include "mwd/gwb.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "mwd/bialg.hpp"
#include "mwd/linalg.hpp"

namespace mwd::gwb {

BoundedGraph::BoundedGraph(Matrix G_, Matrix L_, Matrix R_, Matrix P_, Matrix F_)
    : n(L_.cols()), m(R_.cols()), G(std::move(G_)), L(std::move(L_)), R(std::move(R_)),
      P(std::move(P_)), F(std::move(F_)) {
  const std::size_t k = G.rows();
  auto shape = [](const Matrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
  };
  auto need = [&](const char* name, const Matrix& a, std::size_t rows, std::size_t cols) {
    if (a.rows() != rows || a.cols() != cols) {
      throw DimensionError(std::string("graph morphism: ") + name + " is " + shape(a) +
                           ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (a.field() != G.field()) throw DimensionError("graph morphism: mixed fields");
  };
  need("G", G, k, k);
  need("L", L, k, n);
  need("R", R, k, m);
  need("P", P, m, n);
  need("F", F, m, m);
}

BoundedGraph compose(const BoundedGraph& g, const BoundedGraph& h) {
  if (g.m != h.n) {
    throw DimensionError("compose: codomain " + std::to_string(g.m) + " against domain " +
                         std::to_string(h.n));
  }
  const Field field = g.field();
  const std::size_t k1 = g.vertices(), k2 = h.vertices();
  const Matrix feedback = g.F + transpose(g.F);
  const Matrix inner = h.G + h.L * g.F * transpose(h.L);
  const Matrix G = vstack(hstack(g.G, g.R * transpose(h.L)), hstack(Matrix(field, k2, k1), inner));
  const Matrix L = vstack(g.L, h.L * g.P);
  const Matrix R = vstack(g.R * transpose(h.P), h.R + h.L * feedback * transpose(h.P));
  const Matrix P = h.P * g.P;
  const Matrix F = h.F + h.P * g.F * transpose(h.P);
  return BoundedGraph(G, L, R, P, F);
}

BoundedGraph tensor(const BoundedGraph& g, const BoundedGraph& h) {
  return BoundedGraph(direct_sum(g.G, h.G), direct_sum(g.L, h.L), direct_sum(g.R, h.R),
                      direct_sum(g.P, h.P), direct_sum(g.F, h.F));
}

BoundedGraph identity(std::size_t n, Field field) { return embed(Matrix::identity(field, n)); }

BoundedGraph embed(const Matrix& a) {
  const Field field = a.field();
  return BoundedGraph(Matrix(field, 0, 0), Matrix(field, 0, a.cols()), Matrix(field, 0, a.rows()),
                      a, Matrix(field, a.rows(), a.rows()));
}

BoundedGraph cup(Field field) { return cup(1, field); }

BoundedGraph cup(std::size_t n, Field field) {
  Matrix F(field, 2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) F.set(i, n + i, 1);
  return BoundedGraph(Matrix(field, 0, 0), Matrix(field, 0, 0), Matrix(field, 0, 2 * n),
                      Matrix(field, 2 * n, 0), F);
}

BoundedGraph vertex(Field field) {
  return BoundedGraph(Matrix(field, 1, 1), Matrix::identity(field, 1), Matrix(field, 1, 0),
                      Matrix(field, 0, 1), Matrix(field, 0, 0));
}

BoundedGraph permute_vertices(const BoundedGraph& g, const Permutation& perm) {
  if (perm.size() != g.vertices()) throw DimensionError("permutation size differs from vertex count");
  return BoundedGraph(conjugate_by_permutation(g.G, perm), apply_permutation_rows(g.L, perm),
                      apply_permutation_rows(g.R, perm), g.P, g.F);
}

namespace {

bool same_frame(const BoundedGraph& g, const BoundedGraph& h) {
  return g.field() == h.field() && g.n == h.n && g.m == h.m && g.vertices() == h.vertices() &&
         g.P == h.P && sym_class_equal(g.F, h.F);
}

// Everything about a vertex that a permutation must preserve.
std::vector<std::string> vertex_signatures(const BoundedGraph& g, const Matrix& sym) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < g.vertices(); ++i) {
    std::string s;
    for (std::size_t j = 0; j < g.n; ++j) s += g.L(i, j).get_str() + ",";
    s += "|";
    for (std::size_t j = 0; j < g.m; ++j) s += g.R(i, j).get_str() + ",";
    s += "|" + sym(i, i).get_str() + "|";
    std::vector<Rational> row;
    for (std::size_t j = 0; j < g.vertices(); ++j)
      if (j != i) row.push_back(sym(i, j));
    std::sort(row.begin(), row.end());
    for (const auto& x : row) s += x.get_str() + ",";
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::optional<Permutation> find_isomorphism(const BoundedGraph& g, const BoundedGraph& h,
                                            EqualityCaps caps) {
  if (!same_frame(g, h)) return std::nullopt;
  const std::size_t k = g.vertices();
  if (k > caps.max_vertices) {
    throw CapExceeded("graph equality is capped at " + std::to_string(caps.max_vertices) +
                      " vertices, got " + std::to_string(k));
  }
  const Matrix sg = symmetrize(g.G), sh = symmetrize(h.G);
  const auto sig_g = vertex_signatures(g, sg), sig_h = vertex_signatures(h, sh);
  {
    auto a = sig_g, b = sig_h;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  std::vector<std::vector<std::size_t>> candidates(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (sig_g[i] == sig_h[j]) candidates[i].push_back(j);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].size() < candidates[b].size();
  });
  Permutation perm(k, 0);
  std::vector<bool> used(k, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t depth) {
    if (depth == k) return true;
    const std::size_t i = order[depth];
    for (std::size_t j : candidates[i]) {
      if (used[j]) continue;
      bool consistent = sg(i, i) == sh(j, j);
      for (std::size_t d = 0; d < depth && consistent; ++d) {
        const std::size_t i2 = order[d];
        consistent = sg(i, i2) == sh(j, perm[i2]);
      }
      if (!consistent) continue;
      used[j] = true;
      perm[i] = j;
      if (extend(depth + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  return perm;
}

bool equal(const BoundedGraph& g, const BoundedGraph& h, EqualityCaps caps) {
  return find_isomorphism(g, h, caps).has_value();
}

bool invariants_match(const BoundedGraph& g, const BoundedGraph& h) {
  if (!same_frame(g, h)) return false;
  auto a = vertex_signatures(g, symmetrize(g.G));
  auto b = vertex_signatures(h, symmetrize(h.G));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

BoundedGraph from_dangling(const DanglingGraph& g) {
  const Field field = g.field();
  const std::size_t k = g.vertices();
  return BoundedGraph(g.adjacency, g.boundary, Matrix(field, k, 0), Matrix(field, 0, g.ports()),
                      Matrix(field, 0, 0));
}

DanglingGraph to_dangling(const BoundedGraph& g) { return DanglingGraph(g.G, hstack(g.L, g.R)); }

std::size_t weight(const BoundedGraph& g) { return g.vertices(); }

std::size_t width(const Dec& d) { return mwd::width(d, GraphProp{}); }

BoundedGraph evaluate(const Dec& d) { return mwd::evaluate(d, GraphProp{}); }

Validation validate(const Dec& d, const BoundedGraph& g, EqualityCaps caps) {
  if (g.vertices() > caps.max_vertices)
    throw CapExceeded("graph equality is capped at " + std::to_string(caps.max_vertices) +
                      " vertices");
  return mwd::validate(d, g, GraphProp{caps});
}

// ---------------------------------------------------------------------------
// Recursive rank decompositions → monoidal decompositions

namespace {

Shape relabel_to_positions(const Shape& s, const std::vector<Index>& order, std::size_t total) {
  std::vector<Index> position(total, 0);
  for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = p;
  return s.relabel(position);
}

// g's vertices are exactly the leaves of s.
Dec translate(const DanglingGraph& g, const Shape& s) {
  if (s.is_empty() || s.is_leaf()) return Dec::leaf(from_dangling(g));
  const Field field = g.field();
  const auto v1 = s.left().vertices();
  const auto v2 = s.right().vertices();
  const Matrix sym = symmetrize(g.adjacency);
  const auto cf = coupled_rank_factorization(select_rows(g.boundary, v1),
                                             select_rows(g.boundary, v2), submatrix(sym, v1, v2));
  const std::size_t r1 = cf.l1.cols(), r2 = cf.l2.cols();
  // h : n → r₁ + r₂ routes the ports into the two halves and adds the cross
  // edges as feedback between them.
  const Matrix feedback = vstack(hstack(Matrix(field, r1, r1), cf.core), Matrix(field, r2, r1 + r2));
  const BoundedGraph h(Matrix(field, 0, 0), Matrix(field, 0, g.ports()),
                       Matrix(field, 0, r1 + r2), vstack(cf.n1, cf.n2), feedback);
  const DanglingGraph g1(submatrix(g.adjacency, v1, v1), cf.l1);
  const DanglingGraph g2(submatrix(g.adjacency, v2, v2), cf.l2);
  return Dec::compose(Dec::leaf(h), r1 + r2,
                      Dec::tensor(translate(g1, relabel_to_positions(s.left(), v1, g.vertices())),
                                  translate(g2, relabel_to_positions(s.right(), v2, g.vertices()))));
}

}  // namespace

Dec rank_to_monoidal(const RecRankDec& t) {
  if (t.graph.field() != Field::gf2) {
    throw FieldError(
        "rank_to_monoidal needs GF(2): over the naturals the rank factorizations can leave the "
        "category");
  }
  t.check();
  return translate(t.graph, t.shape);
}

// ---------------------------------------------------------------------------
// Monoidal decompositions → recursive rank decompositions

RecRankDec rebase_boundary(const RecRankDec& t, const Matrix& M, bool full_rank) {
  if (M.rows() != t.graph.ports()) {
    throw DimensionError("rebase_boundary: M has " + std::to_string(M.rows()) + " rows for " +
                         std::to_string(t.graph.ports()) + " ports");
  }
  if (full_rank && rank(M) != M.rows()) {
    throw std::invalid_argument("rebase_boundary: M does not have full row rank");
  }
  RecRankDec out{DanglingGraph(t.graph.adjacency, t.graph.boundary * M), t.shape};
  const std::size_t before = rec_width(t), after = rec_width(out);
  if (full_rank ? after != before : after > before) {
    throw std::logic_error("rebase_boundary: width went from " + std::to_string(before) + " to " +
                           std::to_string(after));
  }
  return out;
}

RecRankDec absorb_feedback(const RecRankDec& t, const Matrix& F, const Matrix& P) {
  const std::size_t j = F.rows();
  const Matrix& B = t.graph.boundary;
  if (F.cols() != j || j > B.cols()) throw DimensionError("absorb_feedback: F does not fit the boundary");
  const std::size_t p = B.cols() - j;
  if (P.rows() != p || P.cols() != j) {
    throw DimensionError("absorb_feedback: P must be " + std::to_string(p) + "x" +
                         std::to_string(j));
  }
  std::vector<Index> left(j), right(p);
  std::iota(left.begin(), left.end(), 0);
  std::iota(right.begin(), right.end(), j);
  const Matrix L = select_cols(B, left);
  const Matrix R = select_cols(B, right);
  const Matrix G = t.graph.adjacency + L * F * transpose(L);
  const Matrix R2 = R + L * (F + transpose(F)) * transpose(P);
  RecRankDec out{DanglingGraph(G, hstack(L, R2)), t.shape};
  const std::size_t before = rec_width(t), after = rec_width(out);
  if (after > before) {
    throw std::logic_error("absorb_feedback: width went from " + std::to_string(before) + " to " +
                           std::to_string(after));
  }
  return out;
}

namespace {

struct Built {
  BoundedGraph value;
  Shape shape;  // over value's vertices
};

Shape shifted(const Shape& s, std::size_t offset, std::size_t total) {
  std::vector<Index> index(total);
  std::iota(index.begin(), index.end(), offset);
  return s.relabel(index);
}

Shape caterpillar(std::size_t k) {
  Shape s;
  for (std::size_t v = 0; v < k; ++v) s = Shape::join(std::move(s), Shape::leaf(v));
  return s;
}

Matrix block(const std::vector<std::vector<Matrix>>& rows) {
  Matrix out;
  bool first_row = true;
  for (const auto& row : rows) {
    Matrix line = row.front();
    for (std::size_t c = 1; c < row.size(); ++c) line = hstack(line, row[c]);
    out = first_row ? line : vstack(out, line);
    first_row = false;
  }
  return out;
}

Built build(const Dec& d) {
  if (d.is_leaf()) {
    const BoundedGraph& g = d.as_leaf().morphism;
    return {g, caterpillar(g.vertices())};
  }
  if (d.is_tensor()) {
    Built a = build(d.as_tensor().left), b = build(d.as_tensor().right);
    const std::size_t k1 = a.value.vertices(), k2 = b.value.vertices();
    BoundedGraph value = tensor(a.value, b.value);
    // Each half sees the other's ports as zero columns and no cross edges.
    const Field field = value.field();
    const Matrix Ma = block({{Matrix::identity(field, a.value.n), Matrix(field, a.value.n, b.value.n),
                              Matrix(field, a.value.n, a.value.m), Matrix(field, a.value.n, b.value.m),
                              Matrix(field, a.value.n, k2)},
                             {Matrix(field, a.value.m, a.value.n), Matrix(field, a.value.m, b.value.n),
                              Matrix::identity(field, a.value.m), Matrix(field, a.value.m, b.value.m),
                              Matrix(field, a.value.m, k2)}});
    const Matrix Mb = block({{Matrix(field, b.value.n, a.value.n), Matrix::identity(field, b.value.n),
                              Matrix(field, b.value.n, a.value.m), Matrix(field, b.value.n, b.value.m),
                              Matrix(field, b.value.n, k1)},
                             {Matrix(field, b.value.m, a.value.n), Matrix(field, b.value.m, b.value.n),
                              Matrix(field, b.value.m, a.value.m), Matrix::identity(field, b.value.m),
                              Matrix(field, b.value.m, k1)}});
    rebase_boundary({to_dangling(a.value), a.shape}, Ma, true);
    rebase_boundary({to_dangling(b.value), b.shape}, Mb, true);
    return {value, Shape::join(a.shape, shifted(b.shape, k1, k2))};
  }
  const auto& c = d.as_compose();
  Built a = build(c.left), b = build(c.right);
  const BoundedGraph& g1 = a.value;
  const BoundedGraph& g2 = b.value;
  if (g1.m != g2.n) throw EvaluationError("compose", "arity mismatch");
  const Field field = g1.field();
  const std::size_t k1 = g1.vertices(), k2 = g2.vertices();
  BoundedGraph value = compose(g1, g2);
  // Right half: absorb the left half's feedback, then express its boundary
  // inside the composite as (L₂ | R₂′)·M₂ = (L₂P₁ | R₂′ | L₂R₁ᵀ).
  const RecRankDec absorbed = absorb_feedback({to_dangling(g2), b.shape}, g1.F, g2.P);
  const Matrix M2 = block({{g1.P, Matrix(field, g1.m, g2.m), transpose(g1.R)},
                           {Matrix(field, g2.m, g1.n), Matrix::identity(field, g2.m),
                            Matrix(field, g2.m, k1)}});
  const RecRankDec right = rebase_boundary(absorbed, M2, false);
  // Left half: (L₁ | R₁)·M₁ = (L₁ | R₁P₂ᵀ | R₁L₂ᵀ).
  const Matrix M1 = block({{Matrix::identity(field, g1.n), Matrix(field, g1.n, g2.m),
                            Matrix(field, g1.n, k2)},
                           {Matrix(field, g1.m, g1.n), transpose(g2.P), transpose(g2.L)}});
  const RecRankDec left = rebase_boundary({to_dangling(g1), a.shape}, M1, false);
  RecRankDec joined{to_dangling(value), Shape::join(a.shape, shifted(b.shape, k1, k2))};
  if (k1 > 0 && k2 > 0) {
    if (!(subtree_label(joined, "L") == left.graph) || !(subtree_label(joined, "R") == right.graph)) {
      throw std::logic_error("monoidal_to_rank: rebased halves disagree with the composite");
    }
  }
  return {value, joined.shape};
}

}  // namespace

RecRankDec monoidal_to_rank(const Dec& d, const BoundedGraph& g) {
  Built b = build(d);
  const auto sigma = find_isomorphism(b.value, g);
  if (!sigma) throw std::invalid_argument("monoidal_to_rank: certificate does not evaluate to g");
  RecRankDec out{to_dangling(g), b.shape.relabel(*sigma)};
  out.check();
  return out;
}

GraphWidthBounds mwd_graph_bounds(const Matrix& adjacency, SolverCaps caps) {
  if (adjacency.field() != Field::gf2) throw FieldError("mwd_graph_bounds needs GF(2)");
  const DanglingGraph state(adjacency);
  auto best = rrwd_exact(state, caps);
  Dec certificate = rank_to_monoidal(best.decomposition);
  const auto check = validate(certificate, from_dangling(state),
                              EqualityCaps{std::max<std::size_t>(caps.max_vertices, 10)});
  if (!check.ok) throw std::logic_error("mwd_graph_bounds: certificate fails: " + check.diagnostic);
  Rational lower(static_cast<long>(best.width), 2);
  lower.canonicalize();
  return {lower, width(certificate), best.width, best.decomposition, certificate};
}

// ---------------------------------------------------------------------------
// Serialisation

Json graph_morphism_to_json(const BoundedGraph& g) {
  return {{"n", g.n},
          {"m", g.m},
          {"k", g.vertices()},
          {"G", matrix_to_json(g.G)},
          {"L", matrix_to_json(g.L)},
          {"R", matrix_to_json(g.R)},
          {"P", matrix_to_json(g.P)},
          {"F", matrix_to_json(g.F)}};
}

BoundedGraph graph_morphism_from_json(const Json& j, Field field) {
  const auto n = j.at("n").get<std::size_t>();
  const auto m = j.at("m").get<std::size_t>();
  const auto k = j.at("k").get<std::size_t>();
  auto read = [&](const char* key, std::size_t rows, std::size_t cols) {
    if (!j.contains(key)) return Matrix(field, rows, cols);
    Matrix a = matrix_from_json(j.at(key), field, cols);
    return a;
  };
  return BoundedGraph(read("G", k, k), read("L", k, n), read("R", k, m), read("P", m, n),
                      read("F", m, m));
}

namespace {

bool identical(const BoundedGraph& g, const BoundedGraph& h) {
  return g.n == h.n && g.m == h.m && g.G == h.G && g.L == h.L && g.R == h.R && g.P == h.P &&
         g.F == h.F;
}

std::optional<std::string> generator_name_of(const BoundedGraph& g) {
  if (identical(g, cup(g.field()))) return "cup";
  if (identical(g, vertex(g.field()))) return "vertex";
  if (g.vertices() == 0 && g.F.is_zero()) {
    if (auto gen = bialg::as_generator(g.P)) return std::string(bialg::generator_name(*gen));
  }
  return std::nullopt;
}

}  // namespace

Json leaf_to_json(const BoundedGraph& g) {
  if (auto name = generator_name_of(g)) return *name;
  return graph_morphism_to_json(g);
}

BoundedGraph leaf_from_json(const Json& j, Field field) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "cup") return cup(field);
    if (name == "vertex") return vertex(field);
    if (auto gen = bialg::parse_generator(name)) return embed(bialg::generator_matrix(*gen, field));
    throw std::invalid_argument("unknown generator '" + name + "'");
  }
  return graph_morphism_from_json(j, field);
}

Json to_json(const Dec& d) { return decomposition_to_json(d, leaf_to_json); }

Dec from_json(const Json& j, Field field) {
  return decomposition_from_json<BoundedGraph>(
      j, [field](const Json& leaf) { return leaf_from_json(leaf, field); });
}

std::string to_dot(const Dec& d) {
  return decomposition_to_dot(d, [](const BoundedGraph& g) {
    if (auto name = generator_name_of(g)) return *name;
    return std::to_string(g.n) + "→" + std::to_string(g.m) + ", k=" + std::to_string(g.vertices());
  });
}

}  // namespace mwd::gwb
