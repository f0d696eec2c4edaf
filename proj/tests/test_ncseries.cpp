#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "penta/lie.hpp"
#include "penta/ncseries.hpp"

using namespace penta;

namespace {

const Letter A = 0, B = 1;

Series S1(int D = 4) { return Series::one(alphabet_f2(), D); }
Series L(Letter l, int D = 4) { return Series::letter(alphabet_f2(), D, l); }
Series W(Word w, int D = 4, Rational c = 1) { return Series::word(alphabet_f2(), D, w, c); }

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

// independent oracle: recursive shuffle u ш v = u1(u' ш v) + v1(u ш v')
std::map<Word, int, WordLess> shuffle_oracle(const Word& u, const Word& v) {
  std::map<Word, int, WordLess> out;
  if (u.empty()) {
    out[v] = 1;
    return out;
  }
  if (v.empty()) {
    out[u] = 1;
    return out;
  }
  for (auto& [w, c] : shuffle_oracle(Word(u.begin() + 1, u.end()), v)) {
    Word x{u[0]};
    x.insert(x.end(), w.begin(), w.end());
    out[x] += c;
  }
  for (auto& [w, c] : shuffle_oracle(u, Word(v.begin() + 1, v.end()))) {
    Word x{v[0]};
    x.insert(x.end(), w.begin(), w.end());
    out[x] += c;
  }
  return out;
}

}  // namespace

TEST_CASE("concatenation product") {
  CHECK((S1() + L(A)) * (S1() + L(B)) == S1() + L(A) + L(B) + W({A, B}));
  CHECK(L(A) * L(A) == W({A, A}));
  Series geo = S1();
  for (int k = 1; k <= 4; ++k) geo += W(Word(k, A));
  CHECK((S1() - L(A)) * geo == S1());
}

TEST_CASE("truncation and mixed degree errors") {
  CHECK(W({A, B, A, B, A}).is_zero());
  CHECK_THROWS_AS(L(A, 3) * L(A, 4), TruncationMismatch);
  CHECK_THROWS_AS(L(A, 3) + Series::letter(alphabet_fn1(2), 3, 0), AlphabetMismatch);
}

TEST_CASE("shuffle product") {
  CHECK(shuffle_mul(L(A), L(B)) == W({A, B}) + W({B, A}));
  CHECK(shuffle_mul(L(A), L(A)) == W({A, A}, 4, 2));
  Series expect(alphabet_f2(), 4);
  for (auto& [w, c] : shuffle_oracle({A, B}, {A})) expect.add(w, c);
  CHECK(shuffle_mul(W({A, B}), L(A)) == expect);
  CHECK(expect == W({A, A, B}, 4, 2) + W({A, B, A}));
}

TEST_CASE("shuffle matches recursive oracle on random words") {
  std::mt19937 rng(7);
  auto a = alphabet_fn1(2);
  std::uniform_int_distribution<int> len(0, 3), let(0, 2);
  for (int t = 0; t < 40; ++t) {
    Word u(len(rng)), v(len(rng));
    for (auto& c : u) c = static_cast<Letter>(let(rng));
    for (auto& c : v) c = static_cast<Letter>(let(rng));
    Series expect(a, 6);
    for (auto& [w, c] : shuffle_oracle(u, v)) expect.add(w, c);
    CHECK(shuffle_mul(Series::word(a, 6, u), Series::word(a, 6, v)) == expect);
  }
}

TEST_CASE("coproduct") {
  auto d1 = coproduct(S1());
  CHECK(d1.terms.size() == 1);
  CHECK(d1.coeff({}, {}) == 1);
  auto dA = coproduct(L(A));
  CHECK(dA.terms.size() == 2);
  CHECK(dA.coeff({A}, {}) == 1);
  CHECK(dA.coeff({}, {A}) == 1);
  // oracle: product of Delta(A) and Delta(B) in the tensor algebra
  auto dAB = coproduct(W({A, B}));
  CHECK(dAB.terms.size() == 4);
  CHECK(dAB.coeff({A, B}, {}) == 1);
  CHECK(dAB.coeff({A}, {B}) == 1);
  CHECK(dAB.coeff({B}, {A}) == 1);
  CHECK(dAB.coeff({}, {A, B}) == 1);
}

TEST_CASE("coproduct is an algebra morphism") {
  std::mt19937 rng(11);
  auto a = alphabet_fn1(2);
  for (int t = 0; t < 10; ++t) {
    Series x = random_series(rng, a, 4, 5, true), y = random_series(rng, a, 4, 5, false);
    auto lhs = coproduct(x * y);
    auto dx = coproduct(x), dy = coproduct(y);
    Tensor rhs{a, 4, {}};
    for (auto& [k1, c1] : dx.terms)
      for (auto& [k2, c2] : dy.terms) {
        Word l = k1.first, r = k1.second;
        l.insert(l.end(), k2.first.begin(), k2.first.end());
        r.insert(r.end(), k2.second.begin(), k2.second.end());
        rhs.add(l, r, c1 * c2);
      }
    CHECK((lhs - rhs).is_zero());
  }
}

TEST_CASE("exp and log") {
  CHECK(exp_series(Series(alphabet_f2(), 4)) == S1());
  CHECK(log_series(exp_series(L(A))) == L(A));
  Series diff = exp_series(L(A)) * exp_series(L(B)) - exp_series(L(A) + L(B));
  CHECK(diff.coeff({A, B}) == Rational(1, 2));
  CHECK_THROWS(exp_series(S1()));
  CHECK_THROWS(log_series(L(A)));
  std::mt19937 rng(3);
  for (int t = 0; t < 5; ++t) {
    Series x = random_series(rng, alphabet_f2(), 5, 6, false);
    CHECK(log_series(exp_series(x)) == x);
    Series g = random_series(rng, alphabet_f2(), 5, 6, true);
    CHECK(exp_series(log_series(g)) == g);
    CHECK(g * inverse_series(g) == S1(5));
  }
}

TEST_CASE("group-likeness") {
  CHECK(is_grouplike(S1()));
  CHECK(is_grouplike(exp_series(L(A))));
  CHECK_FALSE(is_grouplike(S1() + L(A) + W({A, A})));  // exp(A) needs A^2/2
  CHECK_FALSE(is_grouplike(S1() + L(A)));
  LyndonBasis lb(alphabet_fn1(2), 4);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(-3, 3);
  for (int t = 0; t < 5; ++t) {
    LieSeries x{alphabet_fn1(2), 4, {}};
    for (int d = 1; d <= 4; ++d)
      for (auto& w : lb.words(d)) x.coords[w] = num(rng);
    Series g = exp_series(lb.to_series(x));
    CHECK(is_grouplike(g));
    // linear Lie images keep group-likeness
    auto tgt = alphabet_f2();
    std::vector<Series> im{Series::letter(tgt, 4, A) * Rational(2),
                           Series::letter(tgt, 4, B) - Series::letter(tgt, 4, A),
                           Series(tgt, 4)};
    CHECK(is_grouplike(substitute(g, im)));
  }
}

TEST_CASE("substitution") {
  auto a = alphabet_fn1(3);
  Series h = Series::letter(a, 3, letter_B(0, 3)) + Series::word(a, 3, {0, letter_B(1, 3)});
  std::vector<Series> id;
  for (int i = 0; i < a->size(); ++i) id.push_back(Series::letter(a, 3, static_cast<Letter>(i)));
  CHECK(substitute(h, id) == h);
  // tau_1: A -> A, B(c) -> B(c+1)
  std::vector<Series> tau{Series::letter(a, 3, 0)};
  for (int c = 0; c < 3; ++c) tau.push_back(Series::letter(a, 3, letter_B(c + 1, 3)));
  CHECK(substitute(Series::letter(a, 3, letter_B(0, 3)), tau) ==
        Series::letter(a, 3, letter_B(1, 3)));
  CHECK_THROWS_AS(substitute(h, std::vector<Series>{id[0]}), SubstitutionError);
  std::vector<Series> bad = id;
  bad[1] = Series::word(a, 3, {0, 0});
  CHECK_THROWS_AS(substitute(h, bad), SubstitutionError);
}

TEST_CASE("substitution is multiplicative") {
  std::mt19937 rng(9);
  auto tgt = alphabet_fn1(2);
  std::vector<Series> im{Series::letter(tgt, 4, 1) + Series::letter(tgt, 4, 0),
                         Series::letter(tgt, 4, 2) * Rational(-3, 2)};
  for (int t = 0; t < 5; ++t) {
    Series x = random_series(rng, alphabet_f2(), 4, 4, true);
    Series y = random_series(rng, alphabet_f2(), 4, 4, false);
    CHECK(substitute(x * y, im) == substitute(x, im) * substitute(y, im));
  }
}

TEST_CASE("coefficient extraction agrees with splitting") {
  std::mt19937 rng(13);
  for (int t = 0; t < 5; ++t) {
    Series x = random_series(rng, alphabet_f2(), 4, 8, true);
    Series y = random_series(rng, alphabet_f2(), 4, 8, true);
    Series xy = x * y;
    for (auto& [w, c] : xy.terms()) {
      Rational s = 0;
      for (std::size_t i = 0; i <= w.size(); ++i)
        s += x.coeff(Word(w.begin(), w.begin() + i)) * y.coeff(Word(w.begin() + i, w.end()));
      CHECK(s == c);
    }
  }
}

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937 rng(17);
  auto a = alphabet_fn1(3);
  for (int t = 0; t < 5; ++t) {
    Series x = random_series(rng, a, 6, 40, true), y = random_series(rng, a, 6, 40, true);
    CHECK(kernels::concat_mul_serial(x, y) == kernels::concat_mul_omp(x, y));
  }
}

TEST_CASE("associativity and commutativity") {
  std::mt19937 rng(19);
  auto a = alphabet_f2();
  for (int t = 0; t < 5; ++t) {
    Series x = random_series(rng, a, 5, 5, true), y = random_series(rng, a, 5, 5, false),
           z = random_series(rng, a, 5, 5, true);
    CHECK((x * y) * z == x * (y * z));
    CHECK(shuffle_mul(shuffle_mul(x, y), z) == shuffle_mul(x, shuffle_mul(y, z)));
    CHECK(shuffle_mul(x, y) == shuffle_mul(y, x));
  }
}

TEST_CASE("Lyndon basis") {
  LyndonBasis lb(alphabet_f2(), 6);
  CHECK(lb.words(2).size() == 1);
  CHECK(lb.words(2)[0] == Word{A, B});
  for (int d = 1; d <= 6; ++d) CHECK((long)lb.words(d).size() == witt_dimension(d, 2));
  LyndonBasis l3(alphabet_fn1(2), 5);
  for (int d = 1; d <= 5; ++d) CHECK((long)l3.words(d).size() == witt_dimension(d, 3));
  CHECK(witt_dimension(2, 2) == 1);
  CHECK(witt_dimension(6, 2) == 9);

  Series br = W({A, B}, 6) - W({B, A}, 6);
  auto x = lb.from_series(br);
  CHECK(x.coords.size() == 1);
  CHECK(x.coords.at(Word{A, B}) == 1);
  CHECK_THROWS_AS(lb.from_series(W({A, B}, 6)), NotPrimitive);

  std::mt19937 rng(23);
  std::uniform_int_distribution<int> num(-4, 4);
  for (int t = 0; t < 4; ++t) {
    LieSeries y{alphabet_f2(), 6, {}};
    for (int d = 1; d <= 6; ++d)
      for (auto& w : lb.words(d))
        if (int v = num(rng)) y.coords[w] = v;
    Series s = lb.to_series(y);
    CHECK(is_primitive(s));
    CHECK(lb.from_series(s).coords == y.coords);
  }
}
