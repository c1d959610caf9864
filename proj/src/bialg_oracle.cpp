// Exhaustive monoidal width for tiny matrices.
//
// f is t-decomposable iff it is an atom of weight ≤ t, or a contiguous
// ⊗-split of two t-decomposables, or a product b·c through k ≤ t wires with
// both factors t-decomposable. The factor search is finite because wires
// whose column of b or row of c vanishes can be dropped (discarding/zeroing
// never increases width), after which every entry of b and c is bounded by
// an entry of f. Rows of c are enumerated in every order: sorting them would
// need the permutation that sorts them, which the search must derive too.
//
// The search graph has cycles (f = id ; f). Each pass is a depth-first
// search that treats in-progress nodes and nodes already refuted in the same
// pass as failures; successes are always sound. A pass that proves nothing new
// has reached the least fixed point, and only then are its failures kept.
//
// Optionally, a validated construction of width ≤ t also counts as a proof
// of t-decomposability. That only speeds up the positive side: refutations
// still come from the exhaustive search.

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "mwd/bialg.hpp"
#include "mwd/linalg.hpp"

namespace mwd::bialg {

namespace {

struct Key {
  std::size_t rows, cols;
  std::vector<long> entries;
  auto operator<=>(const Key&) const = default;
};

class WidthSearchImpl {
 public:
  WidthSearchImpl(Field field, bool use_constructions)
      : field_(field), use_constructions_(use_constructions) {}

  bool decomposable(const Key& f, std::size_t t) {
    while (true) {
      progress_ = false;
      refuted_in_pass_.clear();
      if (solve(f, t)) return true;
      if (!progress_) {
        for (const auto& g : refuted_in_pass_) {
          auto& known = false_at_[g];
          known = std::max(known, t);
        }
        return false;
      }
    }
  }

 private:
  Matrix to_matrix(const Key& k) const {
    Matrix m(field_, k.rows, k.cols);
    for (std::size_t i = 0; i < k.rows; ++i)
      for (std::size_t j = 0; j < k.cols; ++j) m.set(i, j, Rational(k.entries[i * k.cols + j]));
    return m;
  }

  long mod(long x) const { return field_ == Field::gf2 ? (x & 1) : x; }

  std::size_t constructed_width(const Key& f, const Matrix& fm) {
    auto it = constructed_.find(f);
    if (it != constructed_.end()) return it->second;
    std::size_t w = std::numeric_limits<std::size_t>::max();
    const Dec d = best_decomposition(fm);
    if (non_atomic_leaves(d) == 0 && validate(d, fm).ok) w = width(d);
    constructed_.emplace(f, w);
    return w;
  }

  bool solve(const Key& f, std::size_t t) {
    if (auto it = true_at_.find(f); it != true_at_.end() && it->second <= t) return true;
    if (auto it = false_at_.find(f); it != false_at_.end() && it->second >= t) return false;
    if (on_stack_.count(f) || refuted_in_pass_.count(f)) return false;

    const Matrix fm = to_matrix(f);
    bool ok = as_generator(fm) && std::max(f.rows, f.cols) <= t;
    if (!ok && use_constructions_) ok = constructed_width(f, fm) <= t;
    if (!ok) {
      on_stack_.insert(f);
      ok = try_tensor_splits(f, t) || try_compositions(f, fm, t);
      on_stack_.erase(f);
    }
    if (ok) {
      auto [it, inserted] = true_at_.emplace(f, t);
      if (!inserted) it->second = std::min(it->second, t);
      progress_ = true;
      return true;
    }
    refuted_in_pass_.insert(f);
    return false;
  }

  bool both(const Key& a, const Key& b, std::size_t t) { return solve(a, t) && solve(b, t); }

  bool try_tensor_splits(const Key& f, std::size_t t) {
    const std::size_t m = f.rows, n = f.cols;
    auto at = [&](std::size_t i, std::size_t j) { return f.entries[i * n + j]; };
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = 0; j <= n; ++j) {
        if ((i == 0 && j == 0) || (i == m && j == n)) continue;
        bool zero_blocks = true;
        for (std::size_t a = 0; a < i && zero_blocks; ++a)
          for (std::size_t b = j; b < n && zero_blocks; ++b) zero_blocks = at(a, b) == 0;
        for (std::size_t a = i; a < m && zero_blocks; ++a)
          for (std::size_t b = 0; b < j && zero_blocks; ++b) zero_blocks = at(a, b) == 0;
        if (!zero_blocks) continue;
        Key top{i, j, {}}, bottom{m - i, n - j, {}};
        for (std::size_t a = 0; a < i; ++a)
          for (std::size_t b = 0; b < j; ++b) top.entries.push_back(at(a, b));
        for (std::size_t a = i; a < m; ++a)
          for (std::size_t b = j; b < n; ++b) bottom.entries.push_back(at(a, b));
        if (both(top, bottom, t)) return true;
      }
    }
    return false;
  }

  // All vectors in the box [0, bounds] (or {0,1}^len over GF(2)), nonzero.
  std::vector<std::vector<long>> nonzero_vectors(const std::vector<long>& bounds) const {
    std::vector<std::vector<long>> out;
    std::vector<long> v(bounds.size(), 0);
    while (true) {
      std::size_t p = 0;
      while (p < v.size() && v[p] == bounds[p]) v[p++] = 0;
      if (p == v.size()) break;
      ++v[p];
      out.push_back(v);
    }
    // Sparse, light rows first: unit vectors lead to positive answers soonest.
    auto cost = [](const std::vector<long>& x) {
      long nonzero = 0, sum = 0;
      for (long e : x) nonzero += e != 0, sum += e;
      return std::pair{nonzero, sum};
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const auto& a, const auto& b) { return cost(a) < cost(b); });
    return out;
  }

  // Solutions x ∈ box of x·c = target (c is k×n, row-major).
  void solve_row(const std::vector<long>& c, std::size_t k, std::size_t n,
                 const std::vector<long>& target, long bound, std::vector<long>& x,
                 std::vector<long>& partial, std::size_t pos,
                 std::vector<std::vector<long>>& out) const {
    if (pos == k) {
      for (std::size_t l = 0; l < n; ++l)
        if (mod(partial[l]) != target[l]) return;
      out.push_back(x);
      return;
    }
    for (long value = 0; value <= bound; ++value) {
      bool fits = true;
      for (std::size_t l = 0; l < n; ++l) {
        partial[l] += value * c[pos * n + l];
        if (field_ == Field::rational && partial[l] > target[l]) fits = false;
      }
      x[pos] = value;
      if (fits) solve_row(c, k, n, target, bound, x, partial, pos + 1, out);
      for (std::size_t l = 0; l < n; ++l) partial[l] -= value * c[pos * n + l];
    }
    x[pos] = 0;
  }

  bool try_compositions(const Key& f, const Matrix& fm, std::size_t t) {
    const std::size_t m = f.rows, n = f.cols;
    const std::size_t r = rank(fm);
    if (r > t) return false;
    if (r == 0) {
      // Through zero wires: discard_n ; zero_m.
      if (m > 0 && n > 0 && both(Key{0, n, {}}, Key{m, 0, {}}, t)) return true;
    }
    std::vector<long> col_bound(n, 1), row_bound(m, 1);
    if (field_ == Field::rational) {
      for (std::size_t l = 0; l < n; ++l) {
        col_bound[l] = 0;
        for (std::size_t i = 0; i < m; ++i) col_bound[l] = std::max(col_bound[l], f.entries[i * n + l]);
      }
      for (std::size_t i = 0; i < m; ++i) {
        row_bound[i] = 0;
        for (std::size_t l = 0; l < n; ++l) row_bound[i] = std::max(row_bound[i], f.entries[i * n + l]);
      }
    }
    const auto candidates = nonzero_vectors(col_bound);
    for (std::size_t k = std::max<std::size_t>(r, 1); k <= t; ++k) {
      std::vector<std::size_t> pick(k, 0);
      while (true) {
        Key c{k, n, {}};
        for (auto idx : pick) c.entries.insert(c.entries.end(), candidates[idx].begin(), candidates[idx].end());
        if (rank(to_matrix(c)) >= r && try_left_factors(f, c, t, row_bound)) return true;
        std::size_t p = k;
        while (p > 0 && pick[p - 1] + 1 == candidates.size()) pick[--p] = 0;
        if (p == 0) break;
        ++pick[p - 1];
      }
      if (candidates.empty()) break;
    }
    return false;
  }

  bool try_left_factors(const Key& f, const Key& c, std::size_t t,
                        const std::vector<long>& row_bound) {
    const std::size_t m = f.rows, n = f.cols, k = c.rows;
    std::vector<std::vector<std::vector<long>>> per_row(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<long> target(f.entries.begin() + static_cast<std::ptrdiff_t>(i * n),
                               f.entries.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
      std::vector<long> x(k, 0), partial(n, 0);
      solve_row(c.entries, k, n, target, row_bound[i], x, partial, 0, per_row[i]);
      if (per_row[i].empty()) return false;
    }
    // c must itself be decomposable before any b is worth trying.
    if (!solve(c, t)) return false;

    std::vector<std::size_t> choice(m, 0);
    while (true) {
      Key b{m, k, {}};
      std::vector<bool> used(k, false);
      for (std::size_t i = 0; i < m; ++i) {
        const auto& row = per_row[i][choice[i]];
        b.entries.insert(b.entries.end(), row.begin(), row.end());
        for (std::size_t j = 0; j < k; ++j) used[j] = used[j] || row[j] != 0;
      }
      if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) {
        if (solve(b, t)) return true;
      }
      std::size_t p = 0;
      while (p < m && choice[p] + 1 == per_row[p].size()) choice[p++] = 0;
      if (p == m) break;
      ++choice[p];
    }
    return false;
  }

  Field field_;
  bool use_constructions_;
  bool progress_ = false;
  std::map<Key, std::size_t> true_at_;
  std::map<Key, std::size_t> false_at_;
  std::map<Key, std::size_t> constructed_;
  std::set<Key> on_stack_;
  std::set<Key> refuted_in_pass_;
};

void check_caps(const Matrix& f, const OracleCaps& caps) {
  if (f.field() == Field::rational) {
    if (!f.is_natural()) throw std::invalid_argument("mwd_oracle: entries must be natural numbers");
    if (f.rows() > caps.max_dim_rational || f.cols() > caps.max_dim_rational) {
      throw CapExceeded("mwd_oracle: rational matrices are capped at " +
                        std::to_string(caps.max_dim_rational) + "x" +
                        std::to_string(caps.max_dim_rational));
    }
    if (f.max_entry() > caps.max_entry) {
      throw CapExceeded("mwd_oracle: entries are capped at " + std::to_string(caps.max_entry));
    }
  } else if (f.rows() > caps.max_dim_gf2 || f.cols() > caps.max_dim_gf2) {
    throw CapExceeded("mwd_oracle: GF(2) matrices are capped at " +
                      std::to_string(caps.max_dim_gf2) + "x" + std::to_string(caps.max_dim_gf2));
  }
}

}  // namespace

class WidthOracle::Search : public WidthSearchImpl {
  using WidthSearchImpl::WidthSearchImpl;
};

WidthOracle::WidthOracle(Field field, OracleCaps caps)
    : field_(field), caps_(caps), search_(std::make_unique<Search>(field, caps.use_constructions)) {}

WidthOracle::~WidthOracle() = default;

std::optional<std::size_t> WidthOracle::width(const Matrix& f, std::size_t width_budget) {
  if (f.field() != field_) throw std::invalid_argument("WidthOracle: field mismatch");
  check_caps(f, caps_);
  Key key{f.rows(), f.cols(), {}};
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j) key.entries.push_back(f(i, j).get_num().get_si());
  for (std::size_t t = 0; t <= width_budget; ++t) {
    if (search_->decomposable(key, t)) return t;
  }
  return std::nullopt;
}

std::optional<std::size_t> mwd_oracle(const Matrix& f, std::size_t width_budget,
                                      OracleCaps caps) {
  return WidthOracle(f.field(), caps).width(f, width_budget);
}

}  // namespace mwd::bialg
