#include "crjet/rational.hpp"

#include <cctype>

#include "crjet/errors.hpp"

namespace crjet {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational rational_from_string(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  std::string_view num = body;
  std::string_view den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den)) {
    throw ParseError("malformed rational literal: '" + std::string(text) + "'");
  }
  Rational value(std::string(num) + "/" + std::string(den));
  if (sgn(value.get_den()) == 0) {
    throw ParseError("rational literal with zero denominator: '" + std::string(text) + "'");
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

std::string rational_to_string(const Rational& value) { return value.get_str(); }

Rational make_rational(long num, long den) {
  Rational value(num, den);
  value.canonicalize();
  return value;
}

void CRat::add_mul(const CRat& a, const CRat& b) {
  const bool are = sgn(a.re) != 0, aim = sgn(a.im) != 0;
  const bool bre = sgn(b.re) != 0, bim = sgn(b.im) != 0;
  if (are && bre) re += a.re * b.re;
  if (aim && bim) re -= a.im * b.im;
  if (are && bim) im += a.re * b.im;
  if (aim && bre) im += a.im * b.re;
}

void CRat::sub_mul(const CRat& a, const CRat& b) {
  const bool are = sgn(a.re) != 0, aim = sgn(a.im) != 0;
  const bool bre = sgn(b.re) != 0, bim = sgn(b.im) != 0;
  if (are && bre) re -= a.re * b.re;
  if (aim && bim) re += a.im * b.im;
  if (are && bim) im -= a.re * b.im;
  if (aim && bre) im -= a.im * b.re;
}

CRat operator+(const CRat& a, const CRat& b) { return CRat(a.re + b.re, a.im + b.im); }

CRat operator-(const CRat& a, const CRat& b) { return CRat(a.re - b.re, a.im - b.im); }

CRat operator-(const CRat& a) { return CRat(-a.re, -a.im); }

CRat operator*(const CRat& a, const CRat& b) {
  CRat out;
  out.add_mul(a, b);
  return out;
}

CRat operator/(const CRat& a, const CRat& b) {
  if (b.is_zero()) throw ContractError("division by zero");
  Rational n = b.norm();
  CRat out;
  out.add_mul(a, b.conj());
  out.re /= n;
  out.im /= n;
  return out;
}

CRat& operator+=(CRat& a, const CRat& b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}

CRat& operator-=(CRat& a, const CRat& b) {
  a.re -= b.re;
  a.im -= b.im;
  return a;
}

CRat& operator*=(CRat& a, const CRat& b) {
  a = a * b;
  return a;
}

bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }

bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

std::string CRat::str() const {
  if (is_zero()) return "0";
  std::string out;
  if (sgn(re) != 0) out = rational_to_string(re);
  if (sgn(im) != 0) {
    std::string imag = rational_to_string(abs(im));
    std::string part = (imag == "1") ? "i" : imag + "*i";
    if (out.empty()) {
      out = (sgn(im) < 0 ? "-" : "") + part;
    } else {
      out += (sgn(im) < 0 ? " - " : " + ") + part;
    }
  }
  return out;
}

}  // namespace crjet
