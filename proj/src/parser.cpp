#include "crjet/parser.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "crjet/errors.hpp"

namespace crjet {

namespace {

struct Token {
  enum class Kind { rational, ident, plus, minus, star, caret, lparen, rparen, end };
  Kind kind;
  Rational value;
  std::string text;
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      bump();
    }
    current_ = Token{Token::Kind::end, Rational(0), "", line_, col_};
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    current_.line = line_;
    current_.column = col_;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
      if (pos_ < text_.size() && text_[pos_] == '/' && pos_ + 1 < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        bump();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
      }
      current_.kind = Token::Kind::rational;
      current_.text = std::string(text_.substr(start, pos_ - start));
      current_.value = rational_from_string(current_.text);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_')) {
        bump();
      }
      current_.kind = Token::Kind::ident;
      current_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    switch (c) {
      case '+': current_.kind = Token::Kind::plus; break;
      case '-': current_.kind = Token::Kind::minus; break;
      case '*': current_.kind = Token::Kind::star; break;
      case '^': current_.kind = Token::Kind::caret; break;
      case '(': current_.kind = Token::Kind::lparen; break;
      case ')': current_.kind = Token::Kind::rparen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    current_.text = std::string(1, c);
    bump();
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token current_;
};

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr node(Expr::Kind kind, const Token& at) {
  Expr e;
  e.kind = kind;
  e.line = at.line;
  e.column = at.column;
  return make(std::move(e));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  ExprPtr parse() {
    ExprPtr e = expression();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::end) {
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.column);
    }
    return e;
  }

 private:
  ExprPtr expression() {
    ExprPtr left;
    if (lex_.peek().kind == Token::Kind::minus) {
      Token minus = lex_.take();
      Expr e;
      e.kind = Expr::Kind::neg;
      e.lhs = term();
      e.line = minus.line;
      e.column = minus.column;
      left = make(std::move(e));
    } else {
      left = term();
    }
    while (lex_.peek().kind == Token::Kind::plus || lex_.peek().kind == Token::Kind::minus) {
      Token op = lex_.take();
      Expr e;
      e.kind = op.kind == Token::Kind::plus ? Expr::Kind::add : Expr::Kind::sub;
      e.lhs = left;
      e.rhs = term();
      e.line = op.line;
      e.column = op.column;
      left = make(std::move(e));
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = factor();
    while (lex_.peek().kind == Token::Kind::star) {
      Token op = lex_.take();
      Expr e;
      e.kind = Expr::Kind::mul;
      e.lhs = left;
      e.rhs = factor();
      e.line = op.line;
      e.column = op.column;
      left = make(std::move(e));
    }
    return left;
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (lex_.peek().kind != Token::Kind::caret) return base;
    Token caret = lex_.take();

    bool parenthesized = false;
    if (lex_.peek().kind == Token::Kind::lparen) {
      parenthesized = true;
      lex_.take();
    }
    bool negative = false;
    if (lex_.peek().kind == Token::Kind::minus) {
      negative = true;
      lex_.take();
    }
    Token num = lex_.take();
    if (num.kind != Token::Kind::rational) {
      throw ParseError("exponent must be an integer", num.line, num.column);
    }
    if (num.value.get_den() != 1) {
      throw ParseError("non-integer exponent '" + num.text + "'", num.line, num.column);
    }
    if (negative) {
      throw ParseError("negative exponents are not supported", num.line, num.column);
    }
    if (num.value > 1000) {
      throw ParseError("exponent too large", num.line, num.column);
    }
    if (parenthesized) {
      Token close = lex_.take();
      if (close.kind != Token::Kind::rparen) {
        throw ParseError("expected ')' after exponent", close.line, close.column);
      }
    }
    Expr e;
    e.kind = Expr::Kind::pow;
    e.lhs = base;
    e.exponent = static_cast<int>(num.value.get_num().get_si());
    e.line = caret.line;
    e.column = caret.column;
    return make(std::move(e));
  }

  ExprPtr atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::rational: {
        Expr e;
        e.kind = Expr::Kind::rational;
        e.value = t.value;
        e.line = t.line;
        e.column = t.column;
        return make(std::move(e));
      }
      case Token::Kind::lparen: {
        ExprPtr inner = expression();
        Token close = lex_.take();
        if (close.kind != Token::Kind::rparen) {
          throw ParseError("expected ')'", close.line, close.column);
        }
        return inner;
      }
      case Token::Kind::ident: {
        if (t.text == "i") return node(Expr::Kind::imag_unit, t);
        if (t.text == "conj" || t.text == "Re" || t.text == "Im") {
          Token open = lex_.take();
          if (open.kind != Token::Kind::lparen) {
            throw ParseError("expected '(' after " + t.text, open.line, open.column);
          }
          ExprPtr inner = expression();
          Token close = lex_.take();
          if (close.kind != Token::Kind::rparen) {
            throw ParseError("expected ')'", close.line, close.column);
          }
          Expr e;
          e.kind = t.text == "conj" ? Expr::Kind::conj
                                    : (t.text == "Re" ? Expr::Kind::re : Expr::Kind::im);
          e.lhs = inner;
          e.line = t.line;
          e.column = t.column;
          return make(std::move(e));
        }
        Expr e;
        e.kind = Expr::Kind::variable;
        e.name = t.text;
        e.line = t.line;
        e.column = t.column;
        return make(std::move(e));
      }
      case Token::Kind::end:
        throw ParseError("unexpected end of input", t.line, t.column);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.line, t.column);
    }
  }

  Lexer lex_;
};

// Print levels: expression 0, term 1, factor 2, atom 3; a node prints parens
// when its own level is below the context level.
int level_of(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub:
    case Expr::Kind::neg:
      return 0;
    case Expr::Kind::mul:
      return 1;
    case Expr::Kind::pow:
      return 2;
    default:
      return 3;
  }
}

void print_rec(const Expr& e, int context, std::ostream& out) {
  const bool parens = level_of(e) < context;
  if (parens) out << "(";
  switch (e.kind) {
    case Expr::Kind::rational:
      out << rational_to_string(e.value);
      break;
    case Expr::Kind::imag_unit:
      out << "i";
      break;
    case Expr::Kind::variable:
      out << e.name;
      break;
    case Expr::Kind::conj:
    case Expr::Kind::re:
    case Expr::Kind::im:
      out << (e.kind == Expr::Kind::conj ? "conj" : (e.kind == Expr::Kind::re ? "Re" : "Im"))
          << "(";
      print_rec(*e.lhs, 0, out);
      out << ")";
      break;
    case Expr::Kind::neg:
      out << "-";
      print_rec(*e.lhs, 1, out);
      break;
    case Expr::Kind::add:
      print_rec(*e.lhs, 0, out);
      out << " + ";
      print_rec(*e.rhs, 1, out);
      break;
    case Expr::Kind::sub:
      print_rec(*e.lhs, 0, out);
      out << " - ";
      print_rec(*e.rhs, 1, out);
      break;
    case Expr::Kind::mul:
      print_rec(*e.lhs, 1, out);
      out << "*";
      print_rec(*e.rhs, 2, out);
      break;
    case Expr::Kind::pow:
      print_rec(*e.lhs, 3, out);
      out << "^" << e.exponent;
      break;
  }
  if (parens) out << ")";
}

Series lower_rec(const Expr& e, int n, const RingPtr& ring) {
  switch (e.kind) {
    case Expr::Kind::rational:
      return Series::constant(ring, CRat(e.value));
    case Expr::Kind::imag_unit:
      return Series::constant(ring, CRat::i());
    case Expr::Kind::variable: {
      if (e.name == "w") return Series::variable(ring, n);
      if (n == 1 && e.name == "z") return Series::variable(ring, 0);
      int idx = ring->index_of(e.name);
      if (idx >= 0 && idx < n) return Series::variable(ring, idx);
      throw ParseError("unknown identifier '" + e.name + "' (surface variables are z1..z" +
                           std::to_string(n) + " and w; no transcendental functions exist, " +
                           "truncate non-polynomial data first)",
                       e.line, e.column);
    }
    case Expr::Kind::conj:
      return conjugate_swap(lower_rec(*e.lhs, n, ring));
    case Expr::Kind::re: {
      Series inner = lower_rec(*e.lhs, n, ring);
      return (inner + conjugate_swap(inner)).scaled(CRat(make_rational(1, 2)));
    }
    case Expr::Kind::im: {
      Series inner = lower_rec(*e.lhs, n, ring);
      // (e - conj e) / (2i) = -(i/2) (e - conj e)
      return (inner - conjugate_swap(inner)).scaled(CRat(Rational(0), make_rational(-1, 2)));
    }
    case Expr::Kind::neg:
      return -lower_rec(*e.lhs, n, ring);
    case Expr::Kind::add:
      return lower_rec(*e.lhs, n, ring) + lower_rec(*e.rhs, n, ring);
    case Expr::Kind::sub:
      return lower_rec(*e.lhs, n, ring) - lower_rec(*e.rhs, n, ring);
    case Expr::Kind::mul:
      return lower_rec(*e.lhs, n, ring) * lower_rec(*e.rhs, n, ring);
    case Expr::Kind::pow:
      return lower_rec(*e.lhs, n, ring).pow(e.exponent);
  }
  throw ContractError("unhandled expression node");
}

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string pretty_print(const Expr& e) {
  std::ostringstream out;
  print_rec(e, 0, out);
  return out.str();
}

Series lower_expression(const Expr& e, int n, int order) {
  return lower_rec(e, n, surface_ring(n, order));
}

SurfaceFile parse_surface_file(std::string_view contents) {
  std::istringstream in{std::string(contents)};
  std::string line;
  int lineno = 0;
  SurfaceFile file;
  bool have_n = false;
  std::string expr_text;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) {
      body.remove_prefix(1);
    }
    if (body.empty() || body.front() == '#') continue;
    if (!have_n) {
      std::istringstream header{std::string(body)};
      std::string key, eq;
      int value = 0;
      header >> key >> eq >> value;
      if (key != "n" || eq != "=" || value < 1) {
        throw ParseError("surface file must start with a header line 'n = <dimension>'", lineno, 1);
      }
      file.n = value;
      have_n = true;
    } else {
      if (!expr_text.empty()) expr_text += " ";
      expr_text += std::string(body);
    }
  }
  if (!have_n) throw ParseError("surface file is missing the 'n = <dimension>' header");
  if (expr_text.empty()) throw ParseError("surface file has no defining expression");
  file.expr = parse_expression(expr_text);
  return file;
}

Hypersurface build_surface(const SurfaceFile& file, int order) {
  Series lowered = lower_expression(*file.expr, file.n, order);
  return Hypersurface(file.n, -lowered);
}

}  // namespace crjet
