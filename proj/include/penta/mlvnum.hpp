#pragma once

#include <complex>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "penta/barcx.hpp"
#include "penta/dshuffle.hpp"
#include "penta/series.hpp"

namespace penta {

using BigFloat = boost::multiprecision::mpfr_float;

struct BigComplex {
  BigFloat re, im;

  BigComplex() : re(0), im(0) {}
  BigComplex(BigFloat r, BigFloat i = 0) : re(std::move(r)), im(std::move(i)) {}

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator/=(const BigComplex& o);
  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
  BigFloat abs() const;
  std::complex<double> to_double() const;
};

struct ApproxValue {
  BigComplex value;
  double err = 0;  // absolute bound

  std::complex<double> approx() const { return value.to_double(); }
  double real() const { return approx().real(); }
  // "1.644934066848 ± 3e-31"; the imaginary part is shown when it exceeds the bound
  std::string to_string(int decimals) const;
};

struct NonAdmissible : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// L(a; zeta^e) = sum_{0<m_1<..<m_k} prod zeta^{e_i m_i} / m_i^{a_i}, zeta = exp(2 pi i / N).
ApproxValue mlv(const IndexPair& p, int digits = 30);

// Value of a polylog family (see MplFamily) at (x, y); on one-variable families y is ignored.
ApproxValue mpl_value(const MplFamily& f, std::complex<double> x, std::complex<double> y,
                      int digits = 25);
// Li_{p,q}: p on x in the inner slots, q on y in the outer slots.
ApproxValue mpl_two_var(const IndexPair& p, const IndexPair& q, std::complex<double> x,
                        std::complex<double> y, int digits = 25);

// Iterated integral of a bar tensor along t -> (t x, t y), t in [0, 1], summed as power
// series in t (double precision). On M04N the path is t -> t x. Every word must end in a
// form regular at the origin.
std::complex<double> bar_path_value(const BarTensor& b, std::complex<double> x,
                                    std::complex<double> y = 0.0);

// Holonomy of dH/dz = (A/z + sum_a B(a)/(z - zeta^a)) H, renormalized at 0 and 1.
// Local solutions at both ends come from power series out to radius eps; RK4 covers
// [eps, 1 - eps] with `steps` steps, checked against 2*steps (Richardson).
struct PathSpec {
  double eps = 0.25;
  int steps = 256;
  bool parallel = true;
};

struct KZResult {
  ComplexSeries phi;  // over F_{N+1}
  double err = 0;     // series tails plus Richardson estimate
};

KZResult phi_kz(int N, int weight, const PathSpec& spec = {});
// The N = 1 holonomy written over F_2 (A, B).
ComplexSeries kz_associator(int weight, const PathSpec& spec = {});

// Central differences of Li_{p,q} in x and y against the total differential used to build
// the bar elements (for q empty, the one-variable family in z = x).
struct OdeReport {
  struct Row {
    std::string what;
    std::complex<double> fd, rhs;
  };
  std::vector<Row> rows;
  double tol = 0;
  double max_diff() const;
  bool ok() const { return max_diff() <= tol; }
};
OdeReport ode_check(const IndexPair& p, const IndexPair& q, std::complex<double> x,
                    std::complex<double> y, double delta = 1e-4, int digits = 30);

// Serial reference and OpenMP version of the right-hand side used by phi_kz on the dense
// layout (words of length <= W over N+1 letters, shortlex by length then base-(N+1) rank).
namespace kz {
std::vector<std::complex<double>> rhs_serial(int N, int W, std::complex<double> z,
                                             const std::vector<std::complex<double>>& h);
std::vector<std::complex<double>> rhs_omp(int N, int W, std::complex<double> z,
                                          const std::vector<std::complex<double>>& h);
}  // namespace kz

}  // namespace penta
