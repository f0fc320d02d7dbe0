#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "crjet/hypersurface.hpp"
#include "crjet/series.hpp"

namespace crjet {

// Defining-function expressions:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' integer)?
//   atom   := rational | 'i' | ident | 'conj(' expr ')' | 'Re(' expr ')'
//           | 'Im(' expr ')' | '(' expr ')'
// Rationals are unsigned "p" or "p/q" literals; identifiers are w and z1..zn
// (plain z is accepted for n = 1). conj applies to any subexpression; Re and
// Im expand at lowering time.
struct Expr {
  enum class Kind { rational, imag_unit, variable, conj, re, im, neg, add, sub, mul, pow };

  Kind kind;
  Rational value;                    // rational
  std::string name;                  // variable
  std::shared_ptr<const Expr> lhs;   // unary operand or left operand
  std::shared_ptr<const Expr> rhs;   // right operand
  int exponent = 0;                  // pow
  int line = 0, column = 0;
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr parse_expression(std::string_view text);

// Canonical rendering; parse(pretty_print(e)) reproduces e.
std::string pretty_print(const Expr& e);

// Lowers onto surface_ring(n, order): conj maps the (z, w) block onto
// (zb, wb), Re(e) becomes (e + conj e)/2 and Im(e) becomes (e - conj e)/(2i).
Series lower_expression(const Expr& e, int n, int order);

// A surface file: comment lines start with '#', the first payload line is
// "n = <int>", everything after is one defining expression (may span lines).
struct SurfaceFile {
  int n = 0;
  ExprPtr expr;
};

SurfaceFile parse_surface_file(std::string_view contents);

// The hypersurface rho = -(lowered expression), so that "Im(w) - phi" inputs
// produce rho = phi + (i/2)(w - wb).
Hypersurface build_surface(const SurfaceFile& file, int order);

}  // namespace crjet
