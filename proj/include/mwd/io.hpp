#pragma once

// JSON encodings shared by every module. Matrices are arrays of row arrays;
// integers that do not fit in 64 bits (and non-integral rationals) are
// written as decimal strings.

#include "json.hpp"
#include "mwd/matrix.hpp"

namespace mwd {

using Json = nlohmann::json;

Json scalar_to_json(const Rational& value);
Rational scalar_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);
/// cols_if_empty gives the column count of a matrix with no rows.
Matrix matrix_from_json(const Json& j, Field field, std::size_t cols_if_empty = 0);

}  // namespace mwd
