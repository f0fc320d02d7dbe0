#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace crjet {

using Rational = mpq_class;

// Parses "p" or "p/q" with an optional leading sign; rejects anything else.
Rational rational_from_string(std::string_view text);

// Canonical "p" / "p/q" rendering.
std::string rational_to_string(const Rational& value);

// Builds the canonical form of num/den.
Rational make_rational(long num, long den = 1);

// A complex number with exact rational real and imaginary parts: the
// coefficient field for every series in this library. Closed under +, -, *
// and / by a nonzero value; arithmetic never rounds.
struct CRat {
  Rational re;
  Rational im;

  CRat() : re(0), im(0) {}
  CRat(long value) : re(value), im(0) {}  // NOLINT(google-explicit-constructor)
  explicit CRat(Rational real) : re(std::move(real)), im(0) {}
  CRat(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}

  static CRat i() { return CRat(Rational(0), Rational(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  CRat conj() const { return CRat(re, -im); }
  // |value|^2, exactly.
  Rational norm() const { return re * re + im * im; }

  // *this += a * b and *this -= a * b with zero-factor fast paths; the
  // accumulation loops in the series kernels live on these.
  void add_mul(const CRat& a, const CRat& b);
  void sub_mul(const CRat& a, const CRat& b);

  std::complex<double> to_complex_double() const { return {re.get_d(), im.get_d()}; }

  std::string str() const;
};

CRat operator+(const CRat& a, const CRat& b);
CRat operator-(const CRat& a, const CRat& b);
CRat operator-(const CRat& a);
CRat operator*(const CRat& a, const CRat& b);
CRat operator/(const CRat& a, const CRat& b);

CRat& operator+=(CRat& a, const CRat& b);
CRat& operator-=(CRat& a, const CRat& b);
CRat& operator*=(CRat& a, const CRat& b);

bool operator==(const CRat& a, const CRat& b);
bool operator!=(const CRat& a, const CRat& b);

}  // namespace crjet
