#include "mwd/io.hpp"

#include <limits>

namespace mwd {

Json scalar_to_json(const Rational& value) {
  if (value.get_den() == 1 && value.get_num().fits_slong_p()) {
    return static_cast<std::int64_t>(value.get_num().get_si());
  }
  return value.get_str();
}

Rational scalar_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    Rational value(j.get<std::string>(), 10);
    value.canonicalize();
    return value;
  }
  throw std::invalid_argument("matrix entry must be an integer or a decimal string");
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, Field field, std::size_t cols_if_empty) {
  if (!j.is_array()) throw std::invalid_argument("matrix must be an array of rows");
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw std::invalid_argument("matrix row must be an array");
    rows.emplace_back();
    for (const auto& x : row) rows.back().push_back(scalar_from_json(x));
  }
  return Matrix::from_rows(field, rows, cols_if_empty);
}

}  // namespace mwd
