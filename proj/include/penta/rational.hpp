#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace penta {

using Rational = mpq_class;
using Complex = std::complex<double>;

// mpq_class(n, d) does not reduce; always build fractions through Q.
inline Rational Q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// Canonical text form: "p/q" in lowest terms, "p" when q=1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational: '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

template <class K>
struct Coeff;

template <>
struct Coeff<Rational> {
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
  static Rational from(const Rational& r) { return r; }
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
};

template <>
struct Coeff<Complex> {
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex from(const Rational& r) { return Complex(r.get_d(), 0.0); }
  static Complex zero() { return Complex(0.0, 0.0); }
  static Complex one() { return Complex(1.0, 0.0); }
};

inline int mod(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace penta
