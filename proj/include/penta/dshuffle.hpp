#pragma once

#include <map>
#include <string>
#include <vector>

#include "penta/ncseries.hpp"

namespace penta {

// (a_1..a_k ; e_1..e_k) at level N, zeta_i = zeta_N^{e_i}. a_k is the outermost slot.
struct IndexPair {
  std::vector<int> a;
  std::vector<int> e;
  int N = 1;

  int weight() const;
  int depth() const { return static_cast<int>(a.size()); }
  bool admissible() const;  // (a_k, e_k) != (1, 0)
  int trailing_ones() const;  // length of the trailing run of (1, 0)
  void validate() const;
  std::string to_string() const;  // "a1,..,ak;e1,..,ek@N"
  bool operator==(const IndexPair& o) const { return a == o.a && e == o.e && N == o.N; }
  bool operator<(const IndexPair& o) const;
};

IndexPair parse_index(const std::string& s);
// All pairs at level N with 1 <= weight <= maxw (depth >= 1).
std::vector<IndexPair> enumerate_indices(int N, int maxw, bool admissible_only);

// Ordered surjections {1..k+l} -> {1..M}, increasing on both blocks. Each entry lists
// sigma(1..k+l) as 0-based slots.
std::vector<std::vector<int>> enumerate_sh_leq(int k, int l);
std::vector<IndexPair> stuffle_indices(const IndexPair& p, const IndexPair& q);

// Word A^{a_k-1}B(-e_k) A^{a_{k-1}-1}B(-e_k-e_{k-1}) ... in F_{N+1}.
Word l_word(const IndexPair& p);

template <class K>
K l_coeff(const BasicSeries<K>& h, const IndexPair& p) {
  if (h.alphabet().size() != p.N + 1) throw AlphabetMismatch("l_coeff: level mismatch");
  K c = h.coeff(l_word(p));
  return p.depth() % 2 ? K(-c) : c;
}

// --- Y side ---

// Y_{a_k,e_k} ... Y_{a_1,e_1}; pi_Y sends l_word(p) to (-1)^k times this word.
Word y_word(const IndexPair& p);
template <class K>
K l_coeff_Y(const BasicSeries<K>& y, const IndexPair& p) {
  if (y.alphabet().kind() != AlphabetKind::YN || y.alphabet().level() != p.N)
    throw AlphabetMismatch("l_coeff_Y: level mismatch");
  return y.coeff(y_word(p));
}

template <class K>
BasicSeries<K> pi_Y(const BasicSeries<K>& h);
template <class K>
BasicSeries<K> h_corr(const BasicSeries<K>& h);
template <class K>
BasicSeries<K> h_star(const BasicSeries<K>& h) {
  return h_corr(h) * pi_Y(h);
}
template <class K>
BasicTensor<K> delta_star(const BasicSeries<K>& y);

template <class K>
struct TensorResidual {
  BasicTensor<K> diff;
  bool is_zero() const { return diff.is_zero(); }
  double max_abs() const { return diff.max_abs(); }
  std::vector<double> max_by_degree() const { return diff.max_abs_by_degree(); }
};

// Delta_*(h_*) - h_* (x) h_*, truncated at total weight D. Requires c_A(h) = c_B(0)(h) = 0
// (up to tol for inexact coefficients).
template <class K>
TensorResidual<K> residual_double_shuffle(const BasicSeries<K>& h, int D, double tol = 0.0);

// Y_{m,a} -> -A^{m-1}B(-a)
Series embed_Y(const Series& y);

// --- regularization in Q[T] ---

struct TPoly {
  std::vector<Rational> c;  // c[i] T^i, no trailing zeros

  TPoly() = default;
  TPoly(Rational x) : c{x} { trim(); }
  static TPoly T() { return TPoly(std::vector<Rational>{0, 1}); }
  explicit TPoly(std::vector<Rational> v) : c(std::move(v)) { trim(); }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  Rational at(int i) const { return i < static_cast<int>(c.size()) ? c[i] : Rational(0); }
  bool is_constant() const { return c.size() <= 1; }
  void trim();
  TPoly& operator+=(const TPoly& o);
  TPoly& operator-=(const TPoly& o);
  TPoly operator+(const TPoly& o) const { return TPoly(*this) += o; }
  TPoly operator-(const TPoly& o) const { return TPoly(*this) -= o; }
  TPoly operator*(const TPoly& o) const;
  bool operator==(const TPoly& o) const { return c == o.c; }
  std::string to_string() const;
};

TPoly l_I(const Series& h, const IndexPair& p);

// Series-regularized values, memoized per h. Non-admissible values are obtained from
// stuffle identities with a single unknown, in increasing trailing-ones order.
class SeriesRegularizer {
 public:
  explicit SeriesRegularizer(Series h);
  TPoly value(const IndexPair& p);

 private:
  Series h_;
  std::map<IndexPair, TPoly> memo_;
};
TPoly l_S(const Series& h, const IndexPair& p);

// Linear map on Q[T] with L(exp Tu) = exp(Tu - sum_{n>=2} l_n u^n / n), l_n = l((n;0)).
class LMap {
 public:
  LMap(const Series& h, int maxdeg);
  TPoly operator()(const TPoly& x) const;
  const TPoly& image_of_power(int n) const { return pow_.at(n); }

 private:
  std::vector<TPoly> pow_;  // L(T^n)
};

bool regularization_check(const Series& h, const IndexPair& p);

// l(p) l(q) - sum over the stuffle of l(.), with either raw coefficients or l_S values.
Rational stuffle_defect(const Series& h, const IndexPair& p, const IndexPair& q);
TPoly stuffle_defect_S(SeriesRegularizer& reg, const IndexPair& p, const IndexPair& q);

struct NormalizationLine {
  std::string name;  // "normalization1[k=..]" or "normalization2"
  Rational lhs, rhs;
  bool holds;
};
std::vector<NormalizationLine> check_dmr_normalizations(const Series& h, int a,
                                                        const Rational& mu, int N);

// --- templates ---

namespace dsdetail {
// splits a word of F_{N+1} into blocks A^{n-1}B(b); false if it ends in A
bool split_blocks(const Word& w, std::vector<std::pair<int, int>>& blocks);
}  // namespace dsdetail

template <class K>
BasicSeries<K> pi_Y(const BasicSeries<K>& h) {
  const int N = h.alphabet().size() - 1;
  if (h.alphabet().kind() != AlphabetKind::FN1) throw AlphabetMismatch("pi_Y: expects F_{N+1}");
  auto Y = alphabet_y(N, std::max(1, h.maxdeg()));
  BasicSeries<K> r(Y, h.maxdeg());
  std::vector<std::pair<int, int>> bl;  // (n, b) from left to right
  for (const auto& [w, c] : h.terms()) {
    if (!dsdetail::split_blocks(w, bl)) continue;
    const int m = static_cast<int>(bl.size());
    Word y;
    // leftmost block is A^{n_m-1}B(a_m): Y_{n_m,-a_m}, then Y_{n_i, a_{i+1} - a_i}
    for (int j = 0; j < m; ++j) {
      int root = j == 0 ? -bl[0].second : bl[j - 1].second - bl[j].second;
      y.push_back(letter_Y(bl[j].first, root, N));
    }
    r.add(y, m % 2 ? K(-c) : c);
  }
  return r;
}

template <class K>
BasicSeries<K> h_corr(const BasicSeries<K>& h) {
  const int N = h.alphabet().size() - 1;
  const int D = h.maxdeg();
  auto Y = alphabet_y(N, std::max(1, D));
  BasicSeries<K> x(Y, D);
  const Letter b0 = letter_B(0, N);
  for (int n = 1; n <= D; ++n) {
    Word w(n - 1, letter_A());
    w.push_back(b0);
    K c = h.coeff(w);
    if (Coeff<K>::is_zero(c)) continue;
    c *= Coeff<K>::from(Q(n % 2 ? -1 : 1, n));
    x.add(Word(n, letter_Y(1, 0, N)), c);
  }
  return exp_series(x);
}

template <class K>
BasicTensor<K> delta_star(const BasicSeries<K>& y) {
  const Alphabet& Y = y.alphabet();
  const int N = Y.level();
  BasicTensor<K> t{y.alphabet_ptr(), y.maxdeg(), {}};
  for (const auto& [w, c] : y.terms()) {
    // expand letter by letter
    std::vector<std::pair<Word, Word>> acc{{Word{}, Word{}}};
    for (Letter l : w) {
      const int n = Y.degree(l);
      const int a = static_cast<int>(l) % N;
      std::vector<std::pair<Word, Word>> next;
      for (const auto& [u, v] : acc) {
        auto push = [&](int k, int b) {
          Word u2 = u, v2 = v;
          if (k > 0) u2.push_back(letter_Y(k, b, N));
          if (n - k > 0) v2.push_back(letter_Y(n - k, a - b, N));
          next.emplace_back(std::move(u2), std::move(v2));
        };
        push(n, a);
        push(0, 0);
        for (int k = 1; k < n; ++k)
          for (int b = 0; b < N; ++b) push(k, b);
      }
      acc = std::move(next);
    }
    for (const auto& [u, v] : acc) t.add(u, v, c);
  }
  return t;
}

template <class K>
TensorResidual<K> residual_double_shuffle(const BasicSeries<K>& h0, int D, double tol) {
  if (h0.maxdeg() < D)
    throw TruncationMismatch("double shuffle: input truncated below " + std::to_string(D));
  BasicSeries<K> h = h0.with_maxdeg(D);
  const int N = h.alphabet().size() - 1;
  if (Coeff<K>::magnitude(h.coeff(Word{letter_A()})) > tol ||
      Coeff<K>::magnitude(h.coeff(Word{letter_B(0, N)})) > tol)
    throw std::invalid_argument("double shuffle: requires c_A(h) = c_B(0)(h) = 0");
  BasicSeries<K> s = h_star(h);
  return {delta_star(s) - tensor_product(s, s)};
}

}  // namespace penta
