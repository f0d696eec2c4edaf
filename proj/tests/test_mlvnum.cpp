#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "penta/equations.hpp"
#include "penta/mlvnum.hpp"
#include "penta/ncseries.hpp"

using namespace penta;
using Cd = std::complex<double>;

namespace {

IndexPair ip(const std::string& s) { return parse_index(s); }

const double kZeta2 = M_PI * M_PI / 6;
const double kZeta3 = 1.2020569031595942854;
const double kZeta4 = std::pow(M_PI, 4) / 90;

// Truncated nested sum, innermost index smallest.
Cd direct_sum(const IndexPair& p, int M) {
  const int k = p.depth();
  std::vector<Cd> P(k, 0.0);
  for (int m = 1; m <= M; ++m)
    for (int j = k - 1; j >= 0; --j) {
      Cd t = std::polar(1.0, 2 * M_PI * p.e[j] * double(m) / p.N) / std::pow(double(m), p.a[j]);
      if (j > 0) t *= P[j - 1];
      P[j] += t;
    }
  return P.back();
}

double mlvd(const std::string& s) { return mlv(ip(s), 30).real(); }

}  // namespace

TEST_CASE("mlv: closed forms") {
  CHECK(std::abs(mlvd("2;0@1") - kZeta2) < 1e-15);
  CHECK(std::abs(mlvd("1;1@2") + std::log(2.0)) < 1e-15);
  CHECK(std::abs(mlvd("1,2;0,0@1") - kZeta3) < 1e-15);
  CHECK(std::abs(mlvd("3;0@1") - kZeta3) < 1e-15);
  // sum (-1)^m / m^2 = -pi^2/12
  CHECK(std::abs(mlvd("2;1@2") + kZeta2 / 2) < 1e-15);
  ApproxValue v = mlv(ip("2;0@1"), 40);
  CHECK(v.err < 1e-38);
  CHECK(v.to_string(12).rfind("1.644934066848 ± ", 0) == 0);
  CHECK_THROWS_AS(mlv(ip("1;0@1")), NonAdmissible);
  CHECK_THROWS_AS(mlv(ip("2,1;0,0@1")), NonAdmissible);
}

TEST_CASE("mlv: double shuffle identities of depth 2") {
  const double z22 = mlvd("2,2;0,0@1"), z13 = mlvd("1,3;0,0@1"), z4 = mlvd("4;0@1");
  CHECK(std::abs(z4 - kZeta4) < 1e-14);
  CHECK(std::abs(kZeta2 * kZeta2 - (2 * z22 + z4)) < 1e-12);
  CHECK(std::abs(kZeta2 * kZeta2 - (4 * z13 + 2 * z22)) < 1e-12);
  // level 2 stuffle: L(2;-1)^2 = 2 L(2,2;-1,-1) + L(4;1)
  const double a = mlvd("2;1@2");
  CHECK(std::abs(a * a - (2 * mlvd("2,2;1,1@2") + mlvd("4;0@2"))) < 1e-12);
}

TEST_CASE("mlv agrees with direct summation") {
  for (int N = 1; N <= 4; ++N)
    for (const auto& p : enumerate_indices(N, 3, true)) {
      const Cd v = mlv(p, 20).approx();
      const int M = 200000;
      const Cd d = direct_sum(p, M);
      // tail of the outer sum times the harmonic growth of the inner ones
      const double inner = std::pow(1 + std::log(double(M)), p.depth() - 1);
      const double outer = p.a.back() >= 2
                               ? 1.0 / ((p.a.back() - 1) * std::pow(double(M), p.a.back() - 1))
                               : 2.0 / (M * std::abs(1.0 - std::polar(1.0, 2 * M_PI * p.e.back() / p.N)));
      INFO(p.to_string());
      CHECK(std::abs(v - d) < 2 * inner * outer);
    }
}

TEST_CASE("two-variable values") {
  CHECK(std::abs(mpl_two_var(ip("1;0@1"), ip("2;0@1"), 0.0, 0.5).approx()) == 0);
  // brute double sum in the other order: outer index first
  Cd brute = 0;
  for (int n = 2; n < 400; ++n)
    for (int m = 1; m < n; ++m) brute += std::pow(0.5, m) / double(m) * std::pow(0.3, n) / double(n);
  CHECK(std::abs(mpl_two_var(ip("1;0@1"), ip("1;0@1"), 0.5, 0.3).approx() - brute) < 1e-12);
  // Li_1(x) Li_1(y) = Li_{1,1}(x,y) + Li_{1,1}(y,x) + Li_2(xy), and at level 2
  const IndexPair none{{}, {}, 2};
  for (const auto& [x, y] : {std::pair{0.3, 0.4}, {-0.6, 0.7}}) {
    for (int e : {0, 1}) {
      IndexPair a{{1}, {e}, 2}, b{{1}, {1 - e}, 2}, c{{2}, {1}, 2};
      const Cd lhs = mpl_two_var(a, none, x, 0).approx() * mpl_two_var(b, none, y, 0).approx();
      const Cd rhs = mpl_two_var(a, b, x, y).approx() + mpl_two_var(b, a, y, x).approx() +
                     mpl_two_var(c, none, x * y, 0).approx();
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
  CHECK_THROWS_AS(mpl_two_var(ip("1;0@1"), ip("1;0@1"), 0.5, 1.0), DomainError);
}

TEST_CASE("differential equations") {
  auto one = ode_check(ip("1;0@1"), IndexPair{{}, {}, 1}, 0.3, 0.0);
  REQUIRE(one.rows.size() == 1);
  CHECK(std::abs(one.rows[0].rhs - 1.0 / (1 - 0.3)) < 1e-12);
  CHECK(one.ok());
  for (int N = 1; N <= 3; ++N) {
    auto idx = enumerate_indices(N, 2, false);
    for (const auto& p : idx) {
      CHECK(ode_check(p, IndexPair{{}, {}, N}, 0.35, 0.0).ok());
      for (const auto& q : idx) {
        auto r = ode_check(p, q, Cd(0.3, 0.1), 0.4);
        INFO(p.to_string() << " " << q.to_string() << " " << r.max_diff());
        CHECK(r.ok());
      }
    }
  }
}

TEST_CASE("bar elements integrate to polylogarithms") {
  for (int N = 1; N <= 2; ++N) {
    auto idx = enumerate_indices(N, 2, false);
    for (const auto& p : enumerate_indices(N, 3, false)) {
      const Cd v = bar_path_value(build_l_onevar(p), 0.4);
      CHECK(std::abs(v - mpl_two_var(p, IndexPair{{}, {}, N}, 0.4, 0).approx()) < 1e-12);
    }
    for (const auto& p : idx)
      for (const auto& q : idx) {
        const Cd v = bar_path_value(build_l_twovar(p, q), 0.3, 0.4);
        CHECK(std::abs(v - mpl_two_var(p, q, 0.3, 0.4).approx()) < 1e-12);
        const Cd w = bar_path_value(build_l_twovar_yx(q, p), 0.3, 0.4);
        CHECK(std::abs(w - mpl_two_var(q, p, 0.4, 0.3).approx()) < 1e-12);
      }
  }
  CHECK_THROWS_AS(bar_path_value(BarTensor::word(Space::M04N, 1, {"dz"}), 0.3), DomainError);
}

TEST_CASE("KZ holonomy at level 1") {
  auto r = phi_kz(1, 3);
  auto F = alphabet_fn1(1);
  CHECK(r.err < 1e-8);
  CHECK(std::abs(r.phi.coeff({}) - 1.0) < 1e-12);
  CHECK(std::abs(r.phi.coeff({0})) < 1e-10);
  CHECK(std::abs(r.phi.coeff({1})) < 1e-10);
  CHECK(std::abs(r.phi.coeff({0, 1}) + kZeta2) < 1e-6);
  CHECK(is_grouplike(r.phi, 1e-8));
  ComplexSeries g = kz_associator(3);
  CHECK(residual_pentagon(g, 3).max_abs() < 1e-6);
  CHECK(residual_hexagons(g, Cd(0, 2 * M_PI), 3).max_abs() < 1e-6);
  // serial and parallel right-hand sides agree
  PathSpec s;
  s.parallel = false;
  auto r2 = phi_kz(1, 3, s);
  CHECK((r2.phi - r.phi).max_abs() < 1e-14);
}

TEST_CASE("KZ holonomy at level 2") {
  auto r = phi_kz(2, 3);
  const ComplexSeries& h = r.phi;
  ComplexSeries g = kz_associator(3);
  CHECK(std::abs(h.coeff({2}) - std::log(2.0)) < 1e-6);
  CHECK(std::abs(h.coeff({1})) < 1e-10);
  CHECK(residual_mixed_pentagon(g, h, 2, 3).max_abs() < 1e-5);
  CHECK(residual_double_shuffle(h, 3, 1e-9).max_abs() < 1e-5);
  CHECK(residual_distribution(h, 2, 1, 3).max_abs() < 1e-5);
  for (int N = 1; N <= 2; ++N)
    CHECK(residual_octagon(phi_kz(N, 3).phi, Cd(0, 2 * M_PI), -1, N, 3).max_abs() < 1e-5);
  // the L-values sit in the coefficients
  for (int N = 1; N <= 2; ++N) {
    ComplexSeries phi = phi_kz(N, 3).phi;
    for (const auto& p : enumerate_indices(N, 3, true)) {
      INFO(p.to_string());
      CHECK(std::abs(pair(build_l_onevar(p), phi) - mlv(p, 20).approx()) < 1e-7);
    }
  }
}

TEST_CASE("KZ double shuffle at weight 4") {
  auto h = phi_kz(2, 4).phi;
  CHECK(residual_double_shuffle(h, 4, 1e-9).max_abs() < 1e-5);
}

TEST_CASE("dense right-hand side kernels agree") {
  const int N = 3, W = 4;
  std::vector<Cd> h(1 + 4 + 16 + 64 + 256);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = Cd(std::sin(i * 1.0), std::cos(i * 0.7));
  auto a = kz::rhs_serial(N, W, 0.4, h), b = kz::rhs_omp(N, W, 0.4, h);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}
