// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "penta/barcx.hpp"
#include "penta/dshuffle.hpp"
#include "penta/equations.hpp"
#include "penta/lie.hpp"
#include "penta/mlvnum.hpp"
#include "penta/ncseries.hpp"
#include "penta/presented.hpp"

using namespace penta;
using Cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool c, const std::string& what) {
    if (!c) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// Theorem-1 outputs, shared by criteria 3, 5 and 8.
std::map<int, AssociatorPair> t1;

Series random_series(std::mt19937& rng, AlphabetPtr a, int D, int terms, bool constant_one) {
  Series s(a, D);
  std::uniform_int_distribution<int> len(1, D), num(-5, 5), den(1, 4), let(0, a->size() - 1);
  for (int i = 0; i < terms; ++i) {
    Word w(len(rng));
    for (auto& c : w) c = static_cast<Letter>(let(rng));
    s.add(w, Q(num(rng), den(rng)));
  }
  if (constant_one) s.set(Word{}, 1);
  return s;
}

// Lie dimension via necklace counting, independent of lie.cpp.
long necklace_dim(int d, int n) {
  auto mobius = [](int m) {
    int r = 1;
    for (int p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        m /= p;
        if (m % p == 0) return 0;
        r = -r;
      }
    return m > 1 ? -r : r;
  };
  long s = 0;
  for (int k = 1; k <= d; ++k)
    if (d % k == 0) s += mobius(d / k) * static_cast<long>(std::llround(std::pow(n, k)));
  return s / d;
}

void theorem1(Outcome& o) {
  for (auto [N, D] : {std::pair{1, 6}, {2, 4}, {3, 3}}) {
    SolverConfig cfg;
    cfg.N = N;
    cfg.D = D;
    cfg.mu = 1;
    cfg.imposed = {Eq::Pentagon, Eq::Hexagons, Eq::MixedPentagon};
    AssociatorPair p = solve_degreewise(cfg);
    const std::string at = "(N,D)=(" + std::to_string(N) + "," + std::to_string(D) + ")";
    o.require(residual_pentagon(p.g, D).is_zero(), at + " pentagon");
    o.require(residual_hexagons(p.g, p.mu, D).is_zero(), at + " hexagons");
    o.require(residual_mixed_pentagon(p.g, p.h, N, D).is_zero(), at + " mixed pentagon");
    o.require(p.h.coeff({letter_B(0, N)}) == 0, at + " c_B(0)");
    o.require(residual_double_shuffle(p.h, D).is_zero(), at + " double shuffle");
    o.detail << " " << at << " ok";
    t1[N] = std::move(p);
  }
}

void octagon(Outcome& o) {
  for (int N = 1; N <= 3; ++N) {
    SolverConfig cfg;
    cfg.N = N;
    cfg.D = 3;
    cfg.mu = 1;
    cfg.a = 1;
    cfg.imposed = {Eq::Pentagon, Eq::Hexagons, Eq::MixedPentagon, Eq::Octagon};
    AssociatorPair p = solve_degreewise(cfg);
    const std::string at = "N=" + std::to_string(N);
    o.require(residual_octagon(p.h, p.mu, 1, N, 3).is_zero(), at + " octagon");
    if (N <= 2) {
      Rational c = p.h.coeff({0, letter_B(0, N)});
      o.require(c == Q(1, 24), at + " c_AB(0)");
      o.detail << " " << at << ": c_AB(0)=" << c.get_str() << ";";
    } else {
      Rational d = p.h.coeff({letter_B(1, N)}) - p.h.coeff({letter_B(N - 1, N)});
      o.require(d == Q(-(N - 2), 2 * N), at + " c_B(1)-c_B(-1)");
      o.detail << " " << at << ": c_B(1)-c_B(-1)=" << d.get_str() << ";";
      bool has1 = false;
      for (const auto& l : check_dmr_normalizations(p.h, 1, p.mu, N)) {
        o.require(l.holds, at + " " + l.name);
        has1 = has1 || l.name.rfind("normalization1", 0) == 0;
      }
      o.require(has1, at + " normalization1 evaluated");
      o.detail << " normalizations hold;";
    }
  }
}

void regularization(Outcome& o) {
  for (int N = 1; N <= 2; ++N) {
    int n = 0, bad = 0;
    for (const auto& p : enumerate_indices(N, 4, false)) {
      ++n;
      if (!regularization_check(t1.at(N).h, p)) {
        ++bad;
        o.require(false, p.to_string());
      }
    }
    o.detail << " N=" << N << ": " << n - bad << "/" << n << " indices;";
  }
}

void bar_shuffle(Outcome& o) {
  bool mixed = false;
  for (int N = 1; N <= 2; ++N) {
    int n = 0;
    auto idx = enumerate_indices(N, 4, true);
    for (const auto& p : idx)
      for (const auto& q : idx) {
        if (p.weight() + q.weight() > 4) continue;
        ++n;
        o.require(series_shuffle_bar_check(p, q), p.to_string() + " x " + q.to_string());
        for (int a : p.e)
          for (int b : q.e) mixed = mixed || a != b;
      }
    o.detail << " N=" << N << ": " << n << " pairs;";
  }
  o.require(mixed, "a mixed-root pair");
  o.detail << " mixed roots included";
}

void lemmas(Outcome& o) {
  const int W = 3;
  for (int w : {3, 5}) {
    int checked = 0;
    for (int N = 1; N <= 2; ++N)
      for (int t = 0; t < 20; ++t) {
        auto rep = verify_lemma_all(w, Series(), random_lemma_input(N, W, 1000 + t), W);
        checked += rep.checked;
        for (const auto& f : rep.failures) o.require(false, "lemma " + std::to_string(w) + ": " + f);
      }
    o.require(checked > 0, "lemma " + std::to_string(w) + " checked nothing");
    o.detail << " L" << w << ": " << checked << " identities (20 inputs x N=1,2);";
  }
  for (int w : {4, 6}) {
    int checked = 0;
    for (int N = 1; N <= 2; ++N) {
      auto rep = verify_lemma_all(w, t1.at(N).g, t1.at(N).h, W);
      checked += rep.checked;
      for (const auto& f : rep.failures) o.require(false, "lemma " + std::to_string(w) + ": " + f);
    }
    o.require(checked > 0, "lemma " + std::to_string(w) + " checked nothing");
    o.detail << " L" << w << ": " << checked << " identities on solver pairs;";
  }
}

void kz_holonomy(Outcome& o) {
  auto r1 = phi_kz(1, 3);
  ComplexSeries g = kz_associator(3);
  const double cab = std::abs(r1.phi.coeff({0, 1}) + M_PI * M_PI / 6);
  const double pent = residual_pentagon(g, 3).max_abs();
  o.require(cab < 1e-6, "c_AB");
  o.require(pent < 1e-6, "pentagon");
  auto r2 = phi_kz(2, 3);
  const ComplexSeries& h = r2.phi;
  const double l2 = std::abs(h.coeff({letter_B(1, 2)}) - std::log(2.0));
  const double mp = residual_mixed_pentagon(g, h, 2, 3).max_abs();
  const double ds = residual_double_shuffle(h, 3, 1e-9).max_abs();
  const double di = residual_distribution(h, 2, 1, 3).max_abs();
  o.require(l2 < 1e-6, "c_B(1) = log 2");
  o.require(mp < 1e-5, "mixed pentagon");
  o.require(ds < 1e-5, "double shuffle");
  o.require(di < 1e-5, "distribution");
  char buf[256];
  std::snprintf(buf, sizeof buf,
                " N=1: |c_AB+pi^2/6|=%.1e pentagon %.1e; N=2: |c_B(1)-log2|=%.1e mixed %.1e "
                "dsh %.1e distr %.1e",
                cab, pent, l2, mp, ds, di);
  o.detail << buf;
}

void mlv_identities(Outcome& o) {
  auto v = [](const char* s) { return mlv(parse_index(s), 30).approx(); };
  const Cd z2 = v("2;0@1"), z4 = v("4;0@1"), z22 = v("2,2;0,0@1"), z13 = v("1,3;0,0@1");
  const Cd z3 = v("3;0@1"), l12 = v("1,2;0,0@1");
  const double e1 = std::abs(z2 * z2 - (2.0 * z22 + z4));
  const double e2 = std::abs(z2 * z2 - (4.0 * z13 + 2.0 * z22));
  const double e3 = std::abs(l12 - z3);
  o.require(e1 < 1e-8, "stuffle");
  o.require(e2 < 1e-8, "shuffle");
  o.require(e3 < 1e-8, "L(1,2;1,1)");
  char buf[160];
  std::snprintf(buf, sizeof buf, " stuffle %.1e, shuffle %.1e, |L(1,2;1,1)-zeta(3)| %.1e", e1, e2, e3);
  o.detail << buf;
}

void structural(Outcome& o) {
  std::mt19937 rng(7);
  // algebra axioms
  for (auto a : {alphabet_f2(), alphabet_fn1(2)})
    for (int t = 0; t < 6; ++t) {
      Series x = random_series(rng, a, 5, 6, true), y = random_series(rng, a, 5, 6, false),
             z = random_series(rng, a, 5, 6, true);
      o.require((x * y) * z == x * (y * z), "concat associativity");
      o.require(x * (y + z) == x * y + x * z, "distributivity");
      o.require(shuffle_mul(shuffle_mul(x, y), z) == shuffle_mul(x, shuffle_mul(y, z)), "shuffle assoc");
      o.require(shuffle_mul(x, y) == shuffle_mul(y, x), "shuffle comm");
      auto lhs = coproduct(x * y);
      auto dx = coproduct(x), dy = coproduct(y);
      Tensor rhs{a, 5, {}};
      for (auto& [k1, c1] : dx.terms)
        for (auto& [k2, c2] : dy.terms) {
          Word l = k1.first, r = k1.second;
          l.insert(l.end(), k2.first.begin(), k2.first.end());
          r.insert(r.end(), k2.second.begin(), k2.second.end());
          rhs.add(l, r, c1 * c2);
        }
      o.require((lhs - rhs).is_zero(), "coproduct multiplicative");
    }
  o.detail << " axioms ok;";
  // normal form
  int nf = 0;
  for (int N = 1; N <= 2; ++N) {
    auto P = build_t0(4, N);
    auto q = quotient(P, 4);
    for (const auto& r : P.relations) o.require(q->normal_form(r).is_zero(), "relation in ideal");
    for (int t = 0; t < 10; ++t, ++nf) {
      Series x = random_series(rng, P.gens, 4, 8, false);
      Series n1 = q->normal_form(x);
      o.require(q->normal_form(n1) == n1, "normal form idempotent");
      Series r = P.relations[t % P.relations.size()].with_maxdeg(4);
      Series u = random_series(rng, P.gens, 4, 2, true);
      o.require(q->normal_form(x + u * r * u) == n1, "normal form kills ideal");
    }
  }
  o.detail << " normal form " << nf << " samples;";
  // Witt dimensions
  for (int n : {2, 3, 4}) {
    LyndonBasis lb(n == 2 ? alphabet_f2() : alphabet_fn1(n - 1), 6);
    for (int d = 1; d <= 6; ++d) {
      o.require(static_cast<long>(lb.words(d).size()) == necklace_dim(d, n), "Lyndon count");
      o.require(witt_dimension(d, n) == necklace_dim(d, n), "witt_dimension");
    }
  }
  o.detail << " Witt ok;";
  // group-likeness of solver outputs
  for (const auto& [N, p] : t1) {
    o.require(is_grouplike(p.g), "g grouplike N=" + std::to_string(N));
    o.require(is_grouplike(p.h), "h grouplike N=" + std::to_string(N));
  }
  // morphisms
  int morph = 0;
  for (int N = 1; N <= 2; ++N) {
    for (const char* f : {"1,2,34", "12,3,4", "1,23,4", "1,2,3"})
      for (bool red : {true, false}) {
        o.require(check_morphism(build_xf(f, XfVariant::TNtoTN, 4, N, 2, red)), std::string("xf ") + f);
        ++morph;
      }
    o.require(check_morphism(build_xf("2,3,4", XfVariant::TtoTN, 4, N, 2, true)), "xf 2,3,4");
    ++morph;
    auto P = build_t0(4, N);
    for (const char* tag : {"p2", "p3", "p4"}) {
      auto ims = pullback_algebra_images(tag, N, 2);
      for (const auto& r : P.relations)
        o.require(substitute(r.with_maxdeg(2), ims).is_zero(), std::string("pullback ") + tag);
      ++morph;
    }
  }
  o.require(check_morphism(build_xf("1,2,34", XfVariant::TtoT, 4, 1, 2, true)), "xf TtoT");
  o.require(check_morphism(pi_NN(4, 2, 1, 2)), "pi");
  o.require(check_morphism(delta_NN(4, 2, 1, 2)), "delta");
  for (const char* f : {"1,2,3,45", "12,3,4,5", "1,23,4,5", "2,3,4,5"}) {
    o.require(check_morphism(build_xf(f, XfVariant::TtoT, 5, 1, 2, false)), std::string("coface ") + f);
    ++morph;
  }
  morph += 3;
  o.detail << " " << morph << " morphisms;";
  // d2 certification of every bar element built here
  int cert = 0;
  for (int N = 1; N <= 2; ++N) {
    auto all = enumerate_indices(N, 4, false);
    for (const auto& p : all)
      for (const auto& b : {build_l_x(p), build_l_y(p), build_l_xy(p)}) {
        o.require(b.certified(), "bar " + p.to_string());
        ++cert;
      }
    auto adm = enumerate_indices(N, 4, true);
    for (const auto& p : adm)
      for (const auto& q : adm) {
        if (p.weight() + q.weight() > 4) continue;
        for (const auto& b : {build_l_twovar(p, q), build_l_twovar_yx(q, p)}) {
          o.require(b.certified(), "twovar " + p.to_string() + " " + q.to_string());
          ++cert;
        }
      }
  }
  o.detail << " " << cert << " bar elements certified";
}

}  // namespace

int main() {
  struct Crit {
    const char* name;
    double budget;  // seconds, 0 = none
    std::function<void(Outcome&)> run;
  };
  const std::vector<Crit> crits = {
      {"theorem1 double shuffle", 900, theorem1},
      {"octagon normalizations", 0, octagon},
      {"regularization", 0, regularization},
      {"series shuffle on bar side", 0, bar_shuffle},
      {"lemmas 3-6", 0, lemmas},
      {"KZ holonomy", 120, kz_holonomy},
      {"multiple L-values", 0, mlv_identities},
      {"structural suite", 60, structural},
  };
  int failed = 0;
  for (std::size_t i = 0; i < crits.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      crits[i].run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (crits[i].budget > 0 && s > crits[i].budget) o.require(false, "over time budget");
    failed += !o.ok;
    char t[64];
    std::snprintf(t, sizeof t, " (%.1fs", s);
    std::cout << (o.ok ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << crits[i].name << ":"
              << o.detail.str() << t;
    if (crits[i].budget > 0) std::cout << ", budget " << crits[i].budget << "s";
    std::cout << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
