#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "penta/dshuffle.hpp"
#include "penta/equations.hpp"

using namespace penta;

namespace {

Series solved_h(int N, int D) {
  SolverConfig cfg;
  cfg.N = N;
  cfg.D = D;
  cfg.imposed = {Eq::Pentagon, Eq::Hexagons, Eq::MixedPentagon};
  return solve_degreewise(cfg).h;
}

Series Y(int N, int D, std::initializer_list<std::pair<int, int>> letters, Rational c = 1) {
  Word w;
  for (auto [n, a] : letters) w.push_back(letter_Y(n, a, N));
  return Series::word(alphabet_y(N, D), D, w, c);
}

Series F(int N, int D, const std::string& spec, Rational c = 1) {
  // "A", "B1", ... separated by spaces
  auto al = alphabet_fn1(N);
  Word w;
  std::stringstream ss(spec);
  std::string t;
  while (ss >> t) w.push_back(al->at(t));
  return Series::word(al, D, w, c);
}

// brute-force count of ordered surjections
long count_surjections(int k, int l) {
  const int n = k + l;
  if (n == 0) return 1;
  long cnt = 0;
  std::vector<int> s(n, 0);
  while (true) {
    bool ok = true;
    int M = 0;
    for (int x : s) M = std::max(M, x + 1);
    std::vector<bool> hit(M, false);
    for (int x : s) hit[x] = true;
    for (bool b : hit) ok = ok && b;
    for (int i = 1; i < k; ++i) ok = ok && s[i - 1] < s[i];
    for (int i = k + 1; i < n; ++i) ok = ok && s[i - 1] < s[i];
    if (ok) ++cnt;
    int i = 0;
    while (i < n && ++s[i] == n) s[i++] = 0;
    if (i == n) break;
  }
  return cnt;
}

using Triple = std::map<std::tuple<Word, Word, Word>, Rational>;

Triple left_assoc(const BasicTensor<Rational>& t, const Alphabet& a, int D) {
  Triple r;
  for (const auto& [uv, c] : t.terms) {
    auto d = delta_star(Series::word(t.alpha, D, uv.first));
    for (const auto& [xy, c2] : d.terms)
      if (a.word_degree(xy.first) + a.word_degree(xy.second) + a.word_degree(uv.second) <= D)
        r[{xy.first, xy.second, uv.second}] += c * c2;
  }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

Triple right_assoc(const BasicTensor<Rational>& t, const Alphabet& a, int D) {
  Triple r;
  for (const auto& [uv, c] : t.terms) {
    auto d = delta_star(Series::word(t.alpha, D, uv.second));
    for (const auto& [xy, c2] : d.terms)
      if (a.word_degree(uv.first) + a.word_degree(xy.first) + a.word_degree(xy.second) <= D)
        r[{uv.first, xy.first, xy.second}] += c * c2;
  }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

}  // namespace

TEST_CASE("index pairs") {
  auto p = parse_index("2,1;0,1@3");
  CHECK(p.weight() == 3);
  CHECK(p.depth() == 2);
  CHECK(p.admissible());
  CHECK(p.to_string() == "2,1;0,1@3");
  CHECK(!parse_index("2,1;0,0@2").admissible());
  CHECK(parse_index("2,1,1").trailing_ones() == 2);
  CHECK_THROWS(parse_index("0;0@1"));
  CHECK_THROWS(parse_index("1,2;0@1"));
  CHECK_THROWS(parse_index("x;0@1"));
  // count of all pairs of weight <= 3 at N=2: sum over compositions of 2^depth
  CHECK(enumerate_indices(2, 3, false).size() == 2 + (2 + 4) + (2 + 4 + 4 + 8));
}

TEST_CASE("pi_Y examples") {
  const int D = 3;
  CHECK(pi_Y(F(1, D, "A")).is_zero());
  CHECK(pi_Y(F(1, D, "B0")) == Y(1, D, {{1, 0}}, -1));
  CHECK(pi_Y(F(2, D, "A B1")) == Y(2, D, {{2, 1}}, -1));
  // depth 2: (-1)^2 Y_{1,-a2} Y_{1,a2-a1} for B(a2)B(a1)
  CHECK(pi_Y(F(3, D, "B1 B0")) == Y(3, D, {{1, 2}, {1, 1}}));
  CHECK(pi_Y(F(3, D, "B2 A B1")) == Y(3, D, {{1, 1}, {2, 1}}));
  CHECK(pi_Y(F(2, D, "B1 A")).is_zero());
}

TEST_CASE("delta_star examples and properties") {
  const int D = 4;
  auto one = Series::one(alphabet_y(2, D), D);
  auto d1 = delta_star(one);
  CHECK(d1.terms.size() == 1);
  CHECK(d1.coeff({}, {}) == 1);
  auto d = delta_star(Y(2, D, {{1, 0}}));
  CHECK(d.terms.size() == 2);
  auto d2 = delta_star(Y(2, D, {{2, 0}}));
  const Letter y10 = letter_Y(1, 0, 2), y11 = letter_Y(1, 1, 2), y20 = letter_Y(2, 0, 2);
  CHECK(d2.terms.size() == 4);
  CHECK(d2.coeff({y20}, {}) == 1);
  CHECK(d2.coeff({}, {y20}) == 1);
  CHECK(d2.coeff({y10}, {y10}) == 1);
  CHECK(d2.coeff({y11}, {y11}) == 1);

  std::mt19937 rng(1);
  auto al = alphabet_y(2, D);
  std::uniform_int_distribution<int> let(0, al->size() - 1);
  for (int trial = 0; trial < 5; ++trial) {
    Word u, v;
    while (al->word_degree(u) < 2) u.push_back(static_cast<Letter>(let(rng)));
    while (al->word_degree(v) < 1) v.push_back(static_cast<Letter>(let(rng)));
    if (al->word_degree(u) + al->word_degree(v) > D) continue;
    auto su = Series::word(al, D, u), sv = Series::word(al, D, v);
    // algebra morphism
    auto du = delta_star(su), dv = delta_star(sv), duv = delta_star(su * sv);
    BasicTensor<Rational> prod{al, D, {}};
    for (const auto& [a, x] : du.terms)
      for (const auto& [b, y] : dv.terms) {
        Word l = a.first, r = a.second;
        l.insert(l.end(), b.first.begin(), b.first.end());
        r.insert(r.end(), b.second.begin(), b.second.end());
        prod.add(l, r, x * y);
      }
    CHECK((duv - prod).is_zero());
    // coassociative
    CHECK(left_assoc(duv, *al, D) == right_assoc(duv, *al, D));
  }
}

TEST_CASE("h_corr and h_star") {
  const int D = 3;
  auto one = Series::one(alphabet_fn1(2), D);
  CHECK(h_star(one) == Series::one(alphabet_y(2, D), D));
  CHECK(h_corr(one) == Series::one(alphabet_y(2, D), D));
  Series h = one + F(2, D, "A B0", Q(2, 5));
  auto hc = h_corr(h).up_to(2);
  auto expect = Series::one(alphabet_y(2, D), D) + Y(2, D, {{1, 0}, {1, 0}}, Q(1, 5));
  CHECK(hc == expect);
}

TEST_CASE("Sh<= enumeration") {
  CHECK(enumerate_sh_leq(1, 1).size() == 3);
  CHECK(enumerate_sh_leq(2, 1).size() == 5);
  for (int l = 0; l <= 3; ++l) CHECK(enumerate_sh_leq(0, l).size() == 1);
  for (int k = 0; k <= 3; ++k)
    for (int l = 0; l <= 3; ++l) {
      auto all = enumerate_sh_leq(k, l);
      CHECK((long)all.size() == count_surjections(k, l));
      std::set<std::vector<int>> uniq(all.begin(), all.end());
      CHECK(uniq.size() == all.size());
    }
}

TEST_CASE("stuffle indices") {
  auto r = stuffle_indices(parse_index("2;0@1"), parse_index("2;0@1"));
  std::multiset<std::string> got;
  for (auto& x : r) got.insert(x.to_string());
  CHECK(got == std::multiset<std::string>{"2,2;0,0@1", "2,2;0,0@1", "4;0@1"});
  auto m = stuffle_indices(parse_index("1;1@3"), parse_index("1;2@3"));
  CHECK(std::count(m.begin(), m.end(), parse_index("2;0@3")) == 1);
  auto e = stuffle_indices(parse_index("3,1;1,0@2"), IndexPair{{}, {}, 2});
  CHECK(e.size() == 1);
  CHECK(e[0] == parse_index("3,1;1,0@2"));
  CHECK_THROWS(stuffle_indices(parse_index("1;0@1"), parse_index("1;0@2")));
}

TEST_CASE("l coefficients") {
  const int D = 3;
  Series h = Series::one(alphabet_fn1(1), D) + F(1, D, "A B0", Q(3, 7));
  CHECK(l_coeff(h, IndexPair{{}, {}, 1}) == 1);
  CHECK(l_coeff(h, parse_index("2;0@1")) == Q(-3, 7));
  // roots accumulate from the outside in
  CHECK(l_word(parse_index("1,2;1,1@3")) == Word{letter_A(), letter_B(-1, 3), letter_B(-2, 3)});
}

TEST_CASE("l_I, l_S and the L map") {
  Series h = solved_h(1, 4);
  const Rational l2 = l_coeff(h, parse_index("2;0@1"));
  const TPoly T = TPoly::T();
  CHECK(l_I(h, parse_index("1;0@1")) == TPoly(Rational(-1)) * T);
  CHECK(l_S(h, parse_index("1;0@1")) == TPoly(Rational(-1)) * T);
  CHECK(l_I(h, parse_index("1,1,1;0,0,0@1")) == TPoly(Q(-1, 6)) * T * T * T);
  CHECK(l_S(h, parse_index("1,1;0,0@1")) == (T * T - TPoly(l2)) * TPoly(Q(1, 2)));
  auto adm = parse_index("1,2;0,0@1");
  CHECK(l_I(h, adm) == TPoly(l_coeff(h, adm)));
  CHECK(l_S(h, adm) == TPoly(l_coeff(h, adm)));

  LMap L(h, 3);
  CHECK(L(TPoly(Rational(1))) == TPoly(Rational(1)));
  CHECK(L(T) == T);
  CHECK(L(T * T) == T * T - TPoly(l2));
  CHECK(T.to_string() == "T");
  CHECK((T * T * TPoly(Q(-1, 2)) + TPoly(Rational(3))).to_string() == "-1/2*T^2 + 3");
}

TEST_CASE("regularization relation on solver output") {
  for (auto [N, D] : {std::pair{1, 5}, std::pair{2, 4}}) {
    Series h = solved_h(N, D);
    for (const auto& p : enumerate_indices(N, D, false)) CHECK(regularization_check(h, p));
  }
}

TEST_CASE("stuffle formulas on solver output") {
  for (auto [N, D] : {std::pair{1, 5}, std::pair{2, 4}}) {
    Series h = solved_h(N, D);
    SeriesRegularizer reg(h);
    auto all = enumerate_indices(N, D, false);
    for (const auto& p : all)
      for (const auto& q : all) {
        if (p.weight() + q.weight() > D) continue;
        if (p.admissible() && q.admissible()) CHECK(stuffle_defect(h, p, q) == 0);
        CHECK(stuffle_defect_S(reg, p, q) == TPoly());
      }
  }
}

TEST_CASE("regularized values through h_*") {
  // l_S(p) = coefficient of Y_{a_k,e_k}..Y_{a_1,e_1} in exp(-T Y_{1,0}) h_*
  const int N = 2, D = 4;
  Series h = solved_h(N, D);
  Series hs = h_star(h);
  Series y10 = Y(N, D, {{1, 0}});
  SeriesRegularizer reg(h);
  for (const auto& p : enumerate_indices(N, D, false)) {
    std::vector<Rational> c;
    Series pw = Series::one(alphabet_y(N, D), D);
    Rational fact = 1;
    for (int j = 0; j <= p.weight(); ++j) {
      if (j > 0) fact *= j;
      c.push_back(l_coeff_Y(pw * hs, p) * (j % 2 ? -1 : 1) / fact);
      pw = pw * y10;
    }
    CHECK(reg.value(p) == TPoly(c));
  }
}

TEST_CASE("pi_Y sends l-words to signed y-words") {
  const int N = 3, D = 4;
  for (const auto& p : enumerate_indices(N, D, false)) {
    Series w = Series::word(alphabet_fn1(N), D, l_word(p));
    CHECK(pi_Y(w) == Y(N, D, {}, 0) + Series::word(alphabet_y(N, D), D, y_word(p),
                                                  Rational(p.depth() % 2 ? -1 : 1)));
  }
}

TEST_CASE("embed_Y") {
  const int D = 3;
  CHECK(embed_Y(Y(1, D, {{1, 0}})) == F(1, D, "B0", -1));
  CHECK(embed_Y(Y(2, D, {{2, 1}})) == F(2, D, "A B1", -1));
  CHECK(embed_Y(pi_Y(F(1, D, "B0"))) == F(1, D, "B0"));
}

TEST_CASE("double shuffle residual") {
  CHECK(residual_double_shuffle(Series::one(alphabet_fn1(2), 3), 3).is_zero());
  CHECK_THROWS_AS(residual_double_shuffle(F(1, 2, "B0") + Series::one(alphabet_fn1(1), 2), 2),
                  std::invalid_argument);
  for (auto [N, D] : {std::pair{1, 5}, std::pair{2, 4}, std::pair{3, 3}})
    CHECK(residual_double_shuffle(solved_h(N, D), D).is_zero());
}

TEST_CASE("perturbed solver output breaks double shuffle") {
  const int N = 2, D = 3;
  Series h = solved_h(N, D);
  Series psi = log_series(h);
  LyndonBasis L(alphabet_fn1(N), D);
  int witnesses = 0;
  for (const auto& w : L.words(3)) {
    Series p = psi + L.bracket(w).with_maxdeg(D);
    auto r = residual_double_shuffle(exp_series(p), D);
    if (!r.is_zero()) {
      ++witnesses;
      CHECK(r.max_by_degree()[3] > 0);
      CHECK(r.max_by_degree()[2] == 0);
    }
  }
  CHECK(witnesses > 0);
}

TEST_CASE("normalizations") {
  for (int N = 1; N <= 3; ++N) {
    SolverConfig cfg;
    cfg.N = N;
    cfg.D = 2;
    cfg.imposed = {Eq::Pentagon, Eq::MixedPentagon, Eq::Octagon};
    auto p = solve_degreewise(cfg);
    auto lines = check_dmr_normalizations(p.h, 1, Rational(1), N);
    CHECK(lines.size() == (N >= 3 ? 2u : 1u));
    for (auto& l : lines) CHECK(l.holds);
    if (N == 3) CHECK(lines.back().rhs == Q(-1, 6));
  }
}
