#pragma once

// Self-contained JSON certificates. Every certificate names its kind, its
// field and the width it claims, and embeds the object it decomposes:
//
//   {"kind": "rank-decomposition", "field", "width", "graph", "tree"}
//   {"kind": "recursive-rank-decomposition", "field", "width", "graph", "shape"}
//   {"kind": "monoidal-decomposition", "prop": "bialg" | "grph", "field",
//    "width", "morphism", "decomposition"}
//
// Verification recomputes the width from scratch and checks it against the
// claim; the embedded object can be replaced by an independent one.

#include <optional>
#include <string>

#include "mwd/bialg.hpp"
#include "mwd/gwb.hpp"
#include "mwd/io.hpp"
#include "mwd/rankdec.hpp"

namespace mwd::certificate {

inline constexpr const char* rank_kind = "rank-decomposition";
inline constexpr const char* recursive_kind = "recursive-rank-decomposition";
inline constexpr const char* monoidal_kind = "monoidal-decomposition";

Json rank(const DanglingGraph& g, const RankDecTree& tree);
Json recursive(const RecRankDec& t);
Json matrix(const Matrix& f, const bialg::Dec& d);
Json graph(const gwb::BoundedGraph& g, const gwb::Dec& d);

struct Verdict {
  bool ok = false;
  std::optional<std::size_t> width;  ///< recomputed, when the certificate typechecks
  std::string diagnostic;
};

/// Against is a graph (rank kinds and grph), or a matrix (bialg), in the
/// JSON encoding of the certificate's field; when absent the embedded
/// object is used. Malformed certificates fail; only CapExceeded escapes.
Verdict verify(const Json& cert, const std::optional<Json>& against = std::nullopt,
               gwb::EqualityCaps caps = {});

/// Convert between kinds: "rank", "recursive" or "monoidal" (grph only;
/// GF(2) for the monoidal direction).
Json convert(const Json& cert, const std::string& target);

/// Accepts an array of rows or an object with a "matrix" member.
Matrix matrix_from_input(const Json& j, Field field);

}  // namespace mwd::certificate
