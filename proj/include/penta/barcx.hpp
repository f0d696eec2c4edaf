#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "penta/dshuffle.hpp"
#include "penta/ncseries.hpp"
#include "penta/presented.hpp"

namespace penta {

// M04N: dz (omega_0), dz@a (dlog(z - zeta^a)).
// M05N-xy: dx, dx@a, dy, dy@a, dxy@a  (dlog x, dlog(x - zeta^a), ..., dlog(xy - zeta^a)).
// WN-z: w12, w13, w14, w23@a, w24@a, w34@a  (dlog z_i, dlog(z_i - zeta^a z_j)).
enum class Space { M04N, M05N_xy, WN_z };

std::string space_name(Space s);
Space parse_space(const std::string& s);
AlphabetPtr form_alphabet(Space s, int N);

struct OneForm {
  Space space;
  int N;
  Letter letter;

  static OneForm parse(Space s, int N, const std::string& sym);  // throws on invalid symbol
  std::string symbol() const;
};

struct UncertifiedBar : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Combination of tensor words; the leftmost letter is the outermost integration slot.
class BarTensor {
 public:
  BarTensor() = default;
  BarTensor(Space s, int N, int maxw);
  BarTensor(Space s, int N, Series terms);
  BarTensor(const BarTensor& o) : space_(o.space_), N_(o.N_), s_(o.s_), cert_(o.cert_.load()) {}
  BarTensor& operator=(const BarTensor& o);

  static BarTensor one(Space s, int N, int maxw);
  static BarTensor word(Space s, int N, const std::vector<std::string>& syms,
                        const Rational& c = Rational(1));

  Space space() const { return space_; }
  int N() const { return N_; }
  const Series& series() const { return s_; }
  int max_weight() const;  // largest word length present
  bool is_zero() const { return s_.is_zero(); }
  Rational coeff(const std::vector<std::string>& syms) const;
  void add(const Word& w, const Rational& c);

  BarTensor& operator+=(const BarTensor& o);
  BarTensor& operator-=(const BarTensor& o);
  BarTensor& operator*=(const Rational& c);
  friend BarTensor operator+(BarTensor a, const BarTensor& b) { return a += b; }
  friend BarTensor operator-(BarTensor a, const BarTensor& b) { return a -= b; }
  bool operator==(const BarTensor& o) const;

  std::string to_string() const;

  // d2_residual = 0 and vanishing on the relation ideal through max_weight(). Memoized.
  bool certified() const;

 private:
  void check_same(const BarTensor& o) const;
  Space space_ = Space::M04N;
  int N_ = 1;
  Series s_;
  mutable std::atomic<int> cert_{0};  // 0 unknown, 1 yes, 2 no
};

BarTensor shuffle(const BarTensor& a, const BarTensor& b);

// Degree-2 part of the cohomology model, as the quadratic dual of the relations of
// t0_{4,N}: S^2 is spanned by the contractions with a basis of relations.
class OSAlgebra {
 public:
  static const OSAlgebra& get(Space s, int N);

  int dim1() const { return n_; }
  int dim2() const { return static_cast<int>(rel_.size()); }
  // Coordinates of f ^ g in S^2.
  std::vector<Rational> wedge(Letter f, Letter g) const;
  // Basis of the kernel of Lambda^2 -> S^2; each entry maps pairs (i<j) to coefficients.
  std::vector<std::map<std::pair<Letter, Letter>, Rational>> relation_span() const;
  // Relations of t0_{4,N} rewritten in the form letters (quadratic, antisymmetric).
  const std::vector<Series>& dual_relations() const { return rel_; }

 private:
  OSAlgebra(Space s, int N);
  int n_ = 0;
  std::vector<Series> rel_;
};

struct D2Residual {
  // (prefix, S^2 coordinate, suffix) -> coefficient
  std::map<std::tuple<Word, int, Word>, Rational> terms;
  bool is_zero() const { return terms.empty(); }
};
D2Residual d2_residual(const BarTensor& b);

// Exp Omega_5 in form letters: images of the generators of t0_{4,N}.
std::vector<Series> t0_to_forms(int N, int D);
// Forms of WN-z expressed in M05N-xy and back.
BarTensor to_xy(const BarTensor& b);
BarTensor to_z(const BarTensor& b);

// <b, phi> with phi over F_{N+1} (M04N) or over the generators of t0_{4,N} (M05N-xy).
template <class K>
K pair(const BarTensor& b, const BasicSeries<K>& phi);
// Same, with phi already rewritten in form letters (see t0_to_forms).
template <class K>
K pair_in_forms(const BarTensor& b, const BasicSeries<K>& x);
AlphabetPtr t0_alphabet(int N);

// --- multiple polylogarithm bar elements ---

// Li_c(w_1..w_r) = sum_{0<m_1<..<m_r} prod w_i^{m_i} / m_i^{c_i}, w_i = zeta^{e_i} u_i with
// u_i a monomial in x (bit 1) and y (bit 2); on M04N the variable is z (bit 1).
struct MplFamily {
  std::vector<int> c, e, var;
  int N = 1;
  int weight() const;
  bool operator<(const MplFamily& o) const { return std::tie(c, e, var) < std::tie(o.c, o.e, o.var); }
};

// dF = sum coeff * letter * F_rest, with rest.c empty meaning the constant 1.
struct MplDiffTerm {
  Letter letter;
  Rational coeff;
  MplFamily rest;
};
std::vector<MplDiffTerm> mpl_differential(const MplFamily& f, Space s);

// Bar element of a family via its total differential.
BarTensor build_l(const MplFamily& f, Space s);

BarTensor build_l_onevar(const IndexPair& p);                  // on M04N
BarTensor build_l_x(const IndexPair& p);                       // Li_p(zeta(x))
BarTensor build_l_y(const IndexPair& p);                       // Li_p(zeta(y))
BarTensor build_l_xy(const IndexPair& p);                      // Li_p(zeta(xy))
BarTensor build_l_twovar(const IndexPair& p, const IndexPair& q);  // p on x inside, q on y outside
BarTensor build_l_twovar_yx(const IndexPair& q, const IndexPair& p);  // q on y inside, p on x outside

// Direct word formula for build_l_onevar.
BarTensor l_onevar_direct(const IndexPair& p);

// --- pullbacks ---

// Tags: p2, p3, p4 (M04N -> M05N-xy); i123, i1234_div (= i_{1,23,4}), i234 (to level 1),
// i1234_bar (= i_{12,3,4}), i1_2_34 (M05N-xy -> M04N).
BarTensor pullback(const std::string& tag, const BarTensor& b);
std::vector<std::string> pullback_tags();
// Images of the algebra map behind a tag: for p-tags, images of the t0_{4,N} generators in
// F_{N+1}; for i-tags, images of the free generators in t0_{4,N}.
std::vector<Series> pullback_algebra_images(const std::string& tag, int N, int D);

// --- verifiers ---

bool series_shuffle_bar_check(const IndexPair& p, const IndexPair& q);

struct LemmaReport {
  int lemma = 0;
  int checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Checks the identities of one lemma for the given index pairs. For lemmas 4 and 6 the
// pairs must be admissible (lemma 6 needs only p). Throws std::invalid_argument when the
// hypotheses on (g, h) fail up to the weight needed.
LemmaReport verify_lemma(int which, const Series& g, const Series& h, const IndexPair& p,
                         const IndexPair& q);
// All index pairs (p, q) with weight(p) + weight(q) <= wmax (plus the one-variable
// identities for weight(p) <= wmax).
LemmaReport verify_lemma_all(int which, const Series& g, const Series& h, int wmax);

// exp of a random Lie series over F_{N+1} (coordinates in [-3/2, 3/2]) with no A or B(0)
// term, so c_A = c_{B(0)^n} = 0: a valid input for all four lemmas' one-element checks.
Series random_lemma_input(int N, int D, std::uint64_t seed);

// --- template bodies ---

namespace bcdetail {
void require_phi_alphabet(const BarTensor& b, const Alphabet& a);
}

template <class K>
K pair(const BarTensor& b, const BasicSeries<K>& phi) {
  bcdetail::require_phi_alphabet(b, phi.alphabet());
  K out = Coeff<K>::zero();
  if (phi.maxdeg() < b.max_weight())
    throw TruncationMismatch("pair: series truncated below the tensor weight");
  if (b.space() == Space::M04N) {
    for (const auto& [w, c] : b.series().terms()) {
      K t = phi.coeff(w);
      t *= Coeff<K>::from(c);
      out += t;
    }
    return out;
  }
  const int D = std::max(b.max_weight(), 1);
  std::vector<BasicSeries<K>> ims;
  for (const auto& s : t0_to_forms(b.N(), D)) ims.push_back(convert<K>(s));
  return pair_in_forms(b, substitute(phi.with_maxdeg(D), ims));
}

template <class K>
K pair_in_forms(const BarTensor& b, const BasicSeries<K>& x) {
  if (!x.alphabet().same_as(*form_alphabet(b.space(), b.N())))
    throw AlphabetMismatch("pair_in_forms: series is not over the forms of the tensor");
  if (x.maxdeg() < b.max_weight())
    throw TruncationMismatch("pair: series truncated below the tensor weight");
  if (b.space() != Space::M04N && !b.certified())
    throw UncertifiedBar("pair: bar tensor is not an H0 cocycle");
  K out = Coeff<K>::zero();
  for (const auto& [w, c] : b.series().terms()) {
    K t = x.coeff(w);
    t *= Coeff<K>::from(c);
    out += t;
  }
  return out;
}

}  // namespace penta
