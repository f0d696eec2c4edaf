#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "penta/cache.hpp"
#include "penta/presented.hpp"

using namespace penta;

namespace {

// coefficients of prod_k 1/(1 - r_k t) up to t^D
std::vector<long> hilbert_oracle(const std::vector<long>& rates, int D) {
  std::vector<long> h(D + 1, 0);
  h[0] = 1;
  for (long r : rates)
    for (int d = 1; d <= D; ++d) h[d] += r * h[d - 1];
  return h;
}

Series random_elem(std::mt19937& rng, AlphabetPtr a, int D, int deg, int terms) {
  Series s(a, D);
  std::uniform_int_distribution<int> num(-3, 3), let(0, a->size() - 1);
  for (int i = 0; i < terms; ++i) {
    Word w(deg);
    for (auto& c : w) c = static_cast<Letter>(let(rng));
    s.add(w, num(rng));
  }
  return s;
}

Series L(const Presentation& P, int D, int i, int j, int a = 0) { return t_elem(P, D, i, j, a); }

}  // namespace

TEST_CASE("small presentations") {
  auto t2 = build_t(2, 1);
  CHECK(t2.gens->size() == 1);
  CHECK(t2.relations.empty());
  for (int N = 1; N <= 3; ++N) {
    auto t03 = build_t0(3, N);
    CHECK(t03.gens->size() == N + 1);
    CHECK(t03.relations.empty());
    auto q = QuotientAlgebra(t03, 4);
    long p = 1;
    for (int d = 0; d <= 4; ++d, p *= N + 1) CHECK((long)q.normal_count(d) == p);
  }
  CHECK(build_t0(4, 1).gens->size() == 5);
  CHECK(build_t0(4, 2).gens->size() == 8);
  CHECK(build_t0(4, 3).gens->size() == 11);
}

TEST_CASE("commuting relation in t_4") {
  auto P = build_t(4, 1);
  auto q = quotient(P, 3);
  Series x = concat_mul(L(P, 3, 1, 2), L(P, 3, 3, 4));
  Series y = concat_mul(L(P, 3, 3, 4), L(P, 3, 1, 2));
  CHECK(q->normal_form(x) == q->normal_form(y));
  CHECK(q->in_ideal(x - y));
  // degree-2 rows contain it
  const Echelon& e2 = q->ideal_component(2);
  SparseRow r;
  std::map<std::uint64_t, Rational> m;
  Series diff = (x - y).with_maxdeg(2);
  for (auto& [w, c] : diff.terms()) m[q->rank_of(w)] += c;
  for (auto& [k, v] : m) {
    r.cols.push_back(k);
    r.vals.push_back(v);
  }
  reduce_full(e2, r);
  CHECK(r.empty());
}

TEST_CASE("graded dimensions follow the semidirect decomposition") {
  for (int N = 1; N <= 3; ++N) {
    for (int n = 2; n <= 4; ++n) {
      if (N == 3 && n == 4) continue;  // covered at lower degree below
      std::vector<long> rates{1};
      for (int k = 3; k <= n; ++k) rates.push_back((k - 2) * N + 1);
      auto h = hilbert_oracle(rates, 4);
      QuotientAlgebra q(build_t(n, N), 4);
      for (int d = 0; d <= 4; ++d) CHECK((long)q.normal_count(d) == h[d]);
    }
  }
  QuotientAlgebra q(build_t(4, 3), 3);
  auto h = hilbert_oracle({1, 4, 7}, 3);
  for (int d = 0; d <= 3; ++d) CHECK((long)q.normal_count(d) == h[d]);
}

TEST_CASE("reduced presentations drop the centre") {
  for (int N = 1; N <= 2; ++N) {
    QuotientAlgebra q(build_t0(4, N), 4);
    auto h = hilbert_oracle({2 * N + 1, N + 1}, 4);
    for (int d = 0; d <= 4; ++d) {
      CHECK((long)q.normal_count(d) == h[d]);
      CHECK(q.ideal_dim(d) + q.normal_count(d) == q.free_dim(d));
    }
  }
}

TEST_CASE("central element") {
  std::mt19937 rng(1);
  for (int N = 1; N <= 2; ++N) {
    auto P = build_t(4, N);
    auto q = quotient(P, 4);
    Series z = central_z(P, 4);
    for (int t = 0; t < 6; ++t) {
      Series x = random_elem(rng, P.gens, 4, 1 + t % 3, 4);
      CHECK(q->normal_form(concat_mul(z, x) - concat_mul(x, z)).is_zero());
    }
  }
}

TEST_CASE("normal form is a projection that kills the ideal") {
  std::mt19937 rng(2);
  auto P = build_t0(4, 2);
  auto q = quotient(P, 4);
  for (auto& r : P.relations) CHECK(q->normal_form(r).is_zero());
  for (int t = 0; t < 8; ++t) {
    Series x = random_elem(rng, P.gens, 4, 1 + t % 4, 6);
    Series nx = q->normal_form(x);
    CHECK(q->normal_form(nx) == nx);
    // x + u r v has the same normal form
    Series r = P.relations[t % P.relations.size()].with_maxdeg(4);
    Series u = random_elem(rng, P.gens, 4, 1, 2), v = random_elem(rng, P.gens, 4, 1, 2);
    CHECK(q->normal_form(x + concat_mul(concat_mul(u, r), v)) == nx);
  }
}

TEST_CASE("normal form supports numeric coefficients") {
  auto P = build_t0(4, 1);
  auto q = quotient(P, 3);
  std::mt19937 rng(3);
  Series x = random_elem(rng, P.gens, 3, 3, 10);
  ComplexSeries nx = q->normal_form(to_complex(x));
  CHECK((nx - to_complex(q->normal_form(x))).max_abs() < 1e-12);
}

TEST_CASE("morphisms") {
  for (int N = 1; N <= 2; ++N) {
    auto P = build_t(4, N);
    Morphism id{P, P, {}, 2};
    for (int i = 0; i < P.gens->size(); ++i)
      id.images.push_back(Series::letter(P.gens, 2, static_cast<Letter>(i)));
    CHECK(check_morphism(id));
    for (const char* f : {"1,2,34", "12,3,4", "1,23,4", "1,2,3"}) {
      CHECK(check_morphism(build_xf(f, XfVariant::TNtoTN, 4, N, 2, true)));
      CHECK(check_morphism(build_xf(f, XfVariant::TNtoTN, 4, N, 2, false)));
    }
    CHECK(check_morphism(build_xf("2,3,4", XfVariant::TtoTN, 4, N, 2, true)));
    CHECK(check_morphism(build_xf("1,2,34", XfVariant::TtoT, 4, 1, 2, true)));
    CHECK(check_morphism(pi_NN(4, 2, 1, 2)));
    CHECK(check_morphism(delta_NN(4, 2, 1, 2)));
  }
  // t_{4} -> t_{5} coface maps
  for (const char* f : {"1,2,3,45", "12,3,4,5", "1,23,4,5", "2,3,4,5"})
    CHECK(check_morphism(build_xf(f, XfVariant::TtoT, 5, 1, 2, false)));
  // counterexample: t_4 -> free algebra, t12 -> A, t34 -> B, rest -> 0
  auto P = build_t(4, 1);
  auto F = free_presentation(alphabet_f2());
  Morphism bad{P, F, {}, 2};
  for (const auto& name : P.gens->letters()) {
    if (name == "t12")
      bad.images.push_back(Series::letter(F.gens, 2, 0));
    else if (name == "t34")
      bad.images.push_back(Series::letter(F.gens, 2, 1));
    else
      bad.images.push_back(Series(F.gens, 2));
  }
  CHECK_FALSE(check_morphism(bad));
  CHECK_THROWS(build_xf("2,1,34", XfVariant::TNtoTN, 4, 2, 2));
}

TEST_CASE("explicit substitution lists") {
  for (int N = 1; N <= 3; ++N) {
    const int D = 2;
    auto T = build_t0(4, N);
    auto sum = [&](int i, int j) { return t_sum(T, D, i, j); };
    auto h1 = xf_free_images("1,2,34", XfVariant::TNtoTN, 4, N, D);
    auto h2 = xf_free_images("12,3,4", XfVariant::TNtoTN, 4, N, D);
    auto h3 = xf_free_images("1,23,4", XfVariant::TNtoTN, 4, N, D);
    auto h4 = xf_free_images("1,2,3", XfVariant::TNtoTN, 4, N, D);
    auto g = xf_free_images("2,3,4", XfVariant::TtoTN, 4, N, D);
    CHECK(h1[0] == L(T, D, 1, 2));
    CHECK(h2[0] == L(T, D, 1, 3) + sum(2, 3));
    CHECK(h3[0] == L(T, D, 1, 2) + L(T, D, 1, 3) + sum(2, 3));
    CHECK(h4[0] == L(T, D, 1, 2));
    for (int a = 0; a < N; ++a) {
      CHECK(h1[1 + a] == L(T, D, 2, 3, a) + L(T, D, 2, 4, a));
      CHECK(h2[1 + a] == L(T, D, 3, 4, a));
      CHECK(h3[1 + a] == L(T, D, 2, 4, a) + L(T, D, 3, 4, a));
      CHECK(h4[1 + a] == L(T, D, 2, 3, a));
    }
    CHECK(g[0] == L(T, D, 2, 3, 0));
    CHECK(g[1] == L(T, D, 3, 4, 0));
  }
  auto T = build_t0(4, 1);
  auto p = xf_free_images("12,3,4", XfVariant::TtoT, 4, 1, 2);
  CHECK(p[0] == L(T, 2, 1, 3) + L(T, 2, 2, 3));
  CHECK(p[1] == L(T, 2, 3, 4));
}

TEST_CASE("pi and delta") {
  auto src = build_t(3, 2);
  auto pi = pi_NN(3, 2, 1, 2);
  auto de = delta_NN(3, 2, 1, 2);
  auto tgt = build_t(3, 1);
  Letter t23_1 = src.gens->at("t23@1"), t12 = src.gens->at("t12");
  CHECK(pi.images[t23_1] == L(tgt, 2, 2, 3));
  CHECK(pi.images[t12] == L(tgt, 2, 1, 2) * Rational(2));
  CHECK(de.images[t23_1].is_zero());
  auto idp = pi_NN(3, 2, 2, 2);
  auto idd = delta_NN(3, 2, 2, 2);
  for (int i = 0; i < src.gens->size(); ++i) {
    CHECK(idp.images[i] == Series::letter(src.gens, 2, static_cast<Letter>(i)));
    CHECK(idd.images[i] == Series::letter(src.gens, 2, static_cast<Letter>(i)));
  }
  CHECK_THROWS(pi_NN(3, 3, 2, 2));
}

TEST_CASE("serial and parallel echelon kernels agree") {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> col(0, 60), num(-4, 4), len(1, 8);
  std::vector<SparseRow> rows;
  for (int i = 0; i < 120; ++i) {
    std::map<std::uint64_t, Rational> m;
    int l = len(rng);
    for (int k = 0; k < l; ++k) m[col(rng)] += num(rng);
    SparseRow r;
    for (auto& [c, v] : m)
      if (sgn(v)) {
        r.cols.push_back(c);
        r.vals.push_back(v);
      }
    if (!r.empty()) rows.push_back(r);
  }
  Echelon a = echelon_serial(rows), b = echelon_omp(rows, 7);
  REQUIRE(a.rank() == b.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) CHECK(a.rows[i] == b.rows[i]);
  // every input row reduces to zero
  auto nf = normal_forms_omp(a, rows);
  for (auto& r : nf) CHECK(r.empty());
  CHECK(normal_forms_serial(a, rows) == nf);
}

TEST_CASE("quotient construction is identical with serial kernels") {
  QuotientAlgebra a(build_t0(4, 1), 4, false), b(build_t0(4, 1), 4, true);
  for (int d = 0; d <= 4; ++d) {
    CHECK(a.normal_words(d) == b.normal_words(d));
    REQUIRE(a.ideal_component(d).rank() == b.ideal_component(d).rank());
    for (std::size_t i = 0; i < a.ideal_component(d).rank(); ++i)
      CHECK(a.ideal_component(d).rows[i] == b.ideal_component(d).rows[i]);
  }
}

TEST_CASE("disk cache round trip and corruption") {
  auto dir = std::filesystem::temp_directory_path() / ("penta_cache_test_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  ::setenv("PENTA_CACHE", dir.c_str(), 1);
  auto P = build_t0(4, 1);
  QuotientAlgebra a(P, 4);
  CHECK_FALSE(a.loaded_from_cache(3));
  CHECK(std::filesystem::exists(cache::entry_path(dir, P.hash(), 3)));
  QuotientAlgebra b(P, 4);
  CHECK(b.loaded_from_cache(3));
  CHECK(b.loaded_from_cache(4));
  for (int d = 0; d <= 4; ++d) CHECK(a.normal_words(d) == b.normal_words(d));
  // flip a byte: checksum rejects, construction recomputes
  auto p4 = cache::entry_path(dir, P.hash(), 4);
  {
    std::fstream f(p4, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(20);
    f.put('\x7f');
  }
  Echelon e;
  CHECK_FALSE(cache::load_file(p4, 4, e));
  QuotientAlgebra c(P, 4);
  CHECK_FALSE(c.loaded_from_cache(4));
  CHECK(c.normal_words(4) == a.normal_words(4));
  ::unsetenv("PENTA_CACHE");
  std::filesystem::remove_all(dir);
}
