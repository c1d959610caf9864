#include "mwd/diagram.hpp"

#include <cctype>
#include <sstream>

#include "mwd/bialg.hpp"

namespace mwd::diagram {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::invalid_argument("line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ArityError::ArityError(const std::string& path, const std::string& what)
    : std::invalid_argument("at " + (path.empty() ? std::string("root") : path) + ": " + what),
      path_(path) {}

namespace {

struct Token {
  enum class Kind { word, number, symbol, end };
  Kind kind;
  std::string text;
  std::size_t line, column;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, column = 1, i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t s = 0; s < k; ++s, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      out.push_back({Token::Kind::word, text.substr(i, j - i), line, column});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      std::size_t j = i + 1;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '/'))
        ++j;
      out.push_back({Token::Kind::number, text.substr(i, j - i), line, column});
      advance(j - i);
    } else if (std::string_view(";*()[],").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::symbol, std::string(1, c), line, column});
      advance(1);
    } else {
      throw ParseError(line, column, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::end, "", line, column});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Token::Kind::end) fail("expected ';', '*' or end of input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at_symbol(char c) const {
    return peek().kind == Token::Kind::symbol && peek().text[0] == c;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, what + ", found " + found);
  }
  void expect(char c) {
    if (!at_symbol(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Expr expr() { return chain(Expr::Kind::sequence, ';', [this] { return term(); }); }
  Expr term() { return chain(Expr::Kind::product, '*', [this] { return atom(); }); }

  template <class Next>
  Expr chain(Expr::Kind kind, char op, Next next) {
    const Token& start = peek();
    Expr first = next();
    if (!at_symbol(op)) return first;
    Expr e;
    e.kind = kind;
    e.line = start.line;
    e.column = start.column;
    e.parts.push_back(std::move(first));
    while (at_symbol(op)) {
      ++pos_;
      e.parts.push_back(next());
    }
    return e;
  }

  Rational number(const std::string& what) {
    if (peek().kind != Token::Kind::number) fail("expected " + what);
    Rational q;
    if (q.set_str(peek().text, 10) != 0 || q.get_den() == 0) fail("malformed " + what);
    q.canonicalize();
    ++pos_;
    return q;
  }

  std::size_t count() {
    Rational q = number("a wire count");
    if (q < 0 || q.get_den() != 1 || !q.get_num().fits_ulong_p()) {
      --pos_;
      fail("expected a nonnegative integer");
    }
    return q.get_num().get_ui();
  }

  Expr atom() {
    const Token& t = peek();
    if (at_symbol('(')) {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (t.kind != Token::Kind::word) fail("expected a generator or '('");
    Expr e;
    e.name = t.text;
    e.line = t.line;
    e.column = t.column;
    ++pos_;
    if (e.name == "id") {
      if (peek().kind == Token::Kind::number) e.count = count();
    } else if (e.name == "scalar") {
      e.scalar = number("a scalar");
    } else if (e.name == "mat") {
      expect('[');
      do {
        expect('[');
        std::vector<Rational> row;
        if (!at_symbol(']')) {
          row.push_back(number("a matrix entry"));
          while (at_symbol(',')) {
            ++pos_;
            row.push_back(number("a matrix entry"));
          }
        }
        if (!e.rows.empty() && row.size() != e.rows.front().size())
          fail("rows of a matrix literal must have equal length");
        expect(']');
        e.rows.push_back(std::move(row));
      } while (at_symbol(',') && (++pos_, true));
      expect(']');
    } else if (!bialg::parse_generator(e.name) && e.name != "cup" && e.name != "vertex") {
      --pos_;
      fail("unknown generator");
    }
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string scalar_text(const Rational& q) { return q.get_str(); }

void print_into(std::ostringstream& out, const Expr& e, Expr::Kind parent, bool nested) {
  if (e.kind == Expr::Kind::generator) {
    out << e.name;
    if (e.name == "id" && e.count != 1) out << ' ' << e.count;
    if (e.name == "scalar") out << ' ' << scalar_text(e.scalar);
    if (e.name == "mat") {
      out << " [";
      for (std::size_t i = 0; i < e.rows.size(); ++i) {
        out << (i ? ", [" : "[");
        for (std::size_t j = 0; j < e.rows[i].size(); ++j)
          out << (j ? ", " : "") << scalar_text(e.rows[i][j]);
        out << ']';
      }
      out << ']';
    }
    return;
  }
  // A product binds tighter, so only a sequence under a product needs
  // brackets; same-kind nesting is bracketed to keep the tree shape.
  bool brackets = nested && (e.kind == parent || e.kind == Expr::Kind::sequence);
  if (brackets) out << '(';
  const char* op = e.kind == Expr::Kind::sequence ? " ; " : " * ";
  for (std::size_t i = 0; i < e.parts.size(); ++i) {
    if (i) out << op;
    print_into(out, e.parts[i], e.kind, true);
  }
  if (brackets) out << ')';
}

std::string child_path(const std::string& path, std::size_t i) {
  return path.empty() ? std::to_string(i) : path + "." + std::to_string(i);
}

std::string where(const Expr& e) {
  return " (line " + std::to_string(e.line) + ", column " + std::to_string(e.column) + ")";
}

std::pair<std::size_t, std::size_t> arity_at(const Expr& e, bool graph, const std::string& path) {
  switch (e.kind) {
    case Expr::Kind::generator: {
      if (e.name == "id") return {e.count, e.count};
      if (e.name == "scalar") return {1, 1};
      if (e.name == "mat") return {e.rows.front().size(), e.rows.size()};
      if (e.name == "cup" || e.name == "vertex") {
        if (!graph) throw ArityError(path, e.name + " is not a matrix generator" + where(e));
        return e.name == "cup" ? std::pair<std::size_t, std::size_t>{0, 2}
                               : std::pair<std::size_t, std::size_t>{1, 0};
      }
      Matrix m = bialg::generator_matrix(*bialg::parse_generator(e.name), Field::gf2);
      return {m.cols(), m.rows()};
    }
    case Expr::Kind::sequence: {
      auto [dom, cod] = arity_at(e.parts[0], graph, child_path(path, 0));
      for (std::size_t i = 1; i < e.parts.size(); ++i) {
        auto [d, c] = arity_at(e.parts[i], graph, child_path(path, i));
        if (d != cod)
          throw ArityError(child_path(path, i), "expects " + std::to_string(d) +
                                                    " inputs but receives " +
                                                    std::to_string(cod) + where(e.parts[i]));
        cod = c;
      }
      return {dom, cod};
    }
    case Expr::Kind::product: {
      std::size_t dom = 0, cod = 0;
      for (std::size_t i = 0; i < e.parts.size(); ++i) {
        auto [d, c] = arity_at(e.parts[i], graph, child_path(path, i));
        dom += d;
        cod += c;
      }
      return {dom, cod};
    }
  }
  return {0, 0};
}

template <class Morphism, class Leaf, class Compose, class Tensor>
Morphism fold(const Expr& e, const Leaf& leaf, const Compose& compose, const Tensor& tensor) {
  if (e.kind == Expr::Kind::generator) return leaf(e);
  Morphism acc = fold<Morphism>(e.parts[0], leaf, compose, tensor);
  for (std::size_t i = 1; i < e.parts.size(); ++i) {
    Morphism next = fold<Morphism>(e.parts[i], leaf, compose, tensor);
    acc = e.kind == Expr::Kind::sequence ? compose(acc, next) : tensor(acc, next);
  }
  return acc;
}

Matrix generator_value(const Expr& e, Field field) {
  if (e.name == "id") return Matrix::identity(field, e.count);
  if (e.name == "scalar") return Matrix::from_rows(field, std::vector<std::vector<Rational>>{{e.scalar}});
  if (e.name == "mat") return Matrix::from_rows(field, e.rows, e.rows.front().size());
  return bialg::generator_matrix(*bialg::parse_generator(e.name), field);
}

}  // namespace

Expr parse(const std::string& text) { return Parser(tokenize(text)).parse_all(); }

bool same(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.count != b.count || a.scalar != b.scalar ||
      a.rows != b.rows || a.parts.size() != b.parts.size())
    return false;
  for (std::size_t i = 0; i < a.parts.size(); ++i)
    if (!same(a.parts[i], b.parts[i])) return false;
  return true;
}

std::string print(const Expr& e) {
  std::ostringstream out;
  print_into(out, e, e.kind, false);
  return out.str();
}

std::pair<std::size_t, std::size_t> arity(const Expr& e, bool graph) {
  return arity_at(e, graph, "");
}

Matrix eval_matrix(const Expr& e, Field field) {
  arity(e, false);
  return fold<Matrix>(
      e, [field](const Expr& g) { return generator_value(g, field); },
      [](const Matrix& f, const Matrix& g) { return multiply(g, f); },
      [](const Matrix& f, const Matrix& g) { return direct_sum(f, g); });
}

gwb::BoundedGraph eval_graph(const Expr& e, Field field) {
  arity(e, true);
  return fold<gwb::BoundedGraph>(
      e,
      [field](const Expr& g) {
        if (g.name == "cup") return gwb::cup(field);
        if (g.name == "vertex") return gwb::vertex(field);
        return gwb::embed(generator_value(g, field));
      },
      [](const gwb::BoundedGraph& f, const gwb::BoundedGraph& g) { return gwb::compose(f, g); },
      [](const gwb::BoundedGraph& f, const gwb::BoundedGraph& g) { return gwb::tensor(f, g); });
}

}  // namespace mwd::diagram
