#pragma once

// A small text syntax for string diagrams:
//
//   expr := term (';' term)*        sequential composition, left to right
//   term := atom ('*' atom)*        monoidal product, binds tighter than ';'
//   atom := generator | '(' expr ')'
//
// Generators: id N, swap, copy, add, discard, zero, scalar K, cup, vertex,
// mat [[..], ..]. "id" alone is id 1. cup and vertex only exist in the prop
// of graphs.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mwd/gwb.hpp"
#include "mwd/matrix.hpp"

namespace mwd::diagram {

class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct Expr {
  enum class Kind { generator, sequence, product };
  Kind kind = Kind::generator;
  std::string name;                       ///< generator name
  std::size_t count = 1;                  ///< id N
  Rational scalar;                        ///< scalar K
  std::vector<std::vector<Rational>> rows;  ///< mat literal
  std::vector<Expr> parts;                ///< operands of ';' or '*', two or more
  std::size_t line = 1, column = 1;
};

/// Operands that do not fit together; path lists the operand indices from
/// the root, e.g. "0.1".
class ArityError : public std::invalid_argument {
 public:
  ArityError(const std::string& path, const std::string& what);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Throws ParseError with the position of the offending token.
Expr parse(const std::string& text);
/// Structural equality, ignoring source positions.
bool same(const Expr& a, const Expr& b);
/// Canonical text; parse(print(e)) reproduces e.
std::string print(const Expr& e);

/// (domain, codomain); throws ArityError. Graph-only generators are
/// rejected unless graph is set.
std::pair<std::size_t, std::size_t> arity(const Expr& e, bool graph);

Matrix eval_matrix(const Expr& e, Field field);
gwb::BoundedGraph eval_graph(const Expr& e, Field field);

}  // namespace mwd::diagram
