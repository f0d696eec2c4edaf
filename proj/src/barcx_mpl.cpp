#include <mutex>
#include <random>

#include "penta/barcx.hpp"
#include "penta/equations.hpp"
#include "penta/lie.hpp"
#include "penta/ncseries.hpp"

namespace penta {

int MplFamily::weight() const {
  int w = 0;
  for (int x : c) w += x;
  return w;
}

namespace {

using Combo = std::vector<std::pair<Letter, Rational>>;

// dlog u and dlog(u - zeta^b) for a variable mask u
Combo dlog_var(Space s, int N, int u) {
  if (s == Space::M04N) return {{0, Rational(1)}};
  Combo c;
  if (u & 1) c.emplace_back(0, Rational(1));                          // dx
  if (u & 2) c.emplace_back(static_cast<Letter>(N + 1), Rational(1));  // dy
  return c;
}

Letter dlog_shift(Space s, int N, int u, int b) {
  b = mod(b, N);
  if (s == Space::M04N) return static_cast<Letter>(1 + b);
  switch (u) {
    case 1: return static_cast<Letter>(1 + b);
    case 2: return static_cast<Letter>(N + 2 + b);
    case 3: return static_cast<Letter>(2 * N + 2 + b);
  }
  throw std::logic_error("dlog_shift: bad variable mask");
}

MplFamily drop_slot(const MplFamily& f, std::size_t p, long into) {
  MplFamily g = f;
  if (into >= 0) {
    const auto q = static_cast<std::size_t>(into);
    if (g.var[q] & f.var[p])
      throw std::logic_error("build_l: unknown function family (repeated variable)");
    g.var[q] |= f.var[p];
    g.e[q] = mod(g.e[q] + f.e[p], f.N);
  }
  g.c.erase(g.c.begin() + static_cast<long>(p));
  g.e.erase(g.e.begin() + static_cast<long>(p));
  g.var.erase(g.var.begin() + static_cast<long>(p));
  return g;
}

class LBuilder {
 public:
  LBuilder(Space s, int N, int W) : s_(s), N_(N), W_(W), F_(form_alphabet(s, N)) {}

  const Series& get(const MplFamily& f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    Series r = compute(f);
    return memo_.emplace(f, std::move(r)).first->second;
  }

 private:
  void prepend(Series& out, const Combo& forms, const Series& tail, const Rational& sign) {
    for (const auto& [l, c] : forms)
      for (const auto& [w, x] : tail.terms()) {
        Word v;
        v.reserve(w.size() + 1);
        v.push_back(l);
        v.insert(v.end(), w.begin(), w.end());
        out.add(v, sign * c * x);
      }
  }

  Series compute(const MplFamily& f) {
    Series out(F_, W_);
    if (f.c.empty()) {
      out.add(Word{}, Rational(1));
      return out;
    }
    for (const auto& t : mpl_differential(f, s_)) prepend(out, {{t.letter, t.coeff}}, get(t.rest), Rational(1));
    return out;
  }

  Space s_;
  int N_, W_;
  AlphabetPtr F_;
  std::map<MplFamily, Series> memo_;
};

MplFamily family(const IndexPair& p, int var_last) {
  p.validate();
  MplFamily f;
  f.N = p.N;
  f.c = p.a;
  for (int e : p.e) f.e.push_back(mod(e, p.N));
  f.var.assign(p.a.size(), 0);
  if (!f.var.empty()) f.var.back() = var_last;
  return f;
}

MplFamily concat(const IndexPair& p, int vp, const IndexPair& q, int vq) {
  if (p.N != q.N) throw std::invalid_argument("two-variable element: levels differ");
  MplFamily f = family(p, vp), g = family(q, vq);
  f.c.insert(f.c.end(), g.c.begin(), g.c.end());
  f.e.insert(f.e.end(), g.e.begin(), g.e.end());
  f.var.insert(f.var.end(), g.var.begin(), g.var.end());
  return f;
}

void require_nonempty(const IndexPair& p) {
  if (p.depth() == 0) throw std::invalid_argument("bar element: empty index");
}

}  // namespace

std::vector<MplDiffTerm> mpl_differential(const MplFamily& f, Space s) {
  std::vector<MplDiffTerm> out;
  if (f.c.empty()) return out;
  if (f.var.back() == 0)
    throw std::logic_error("build_l: unknown function family (outermost slot is constant)");
  const int N = f.N;
  const std::size_t r = f.c.size();
  auto push = [&](const Combo& forms, const MplFamily& g, const Rational& sign) {
    for (const auto& [l, c] : forms) out.push_back({l, sign * c, g});
  };
  for (std::size_t p = 0; p < r; ++p) {
    const int u = f.var[p];
    if (!u) continue;
    if (f.c[p] >= 2) {
      // u d/du lowers the exponent at p
      MplFamily g = f;
      --g.c[p];
      push(dlog_var(s, N, u), g, Rational(1));
      continue;
    }
    // exponent 0 at p: resum the geometric series in m_p
    const Letter sh = dlog_shift(s, N, u, -f.e[p]);
    push({{sh, Rational(1)}}, drop_slot(f, p, static_cast<long>(p) - 1), Rational(-1));
    if (p + 1 < r) {
      MplFamily g = drop_slot(f, p, static_cast<long>(p) + 1);
      push(dlog_var(s, N, u), g, Rational(-1));
      push({{sh, Rational(1)}}, g, Rational(1));
    }
  }
  return out;
}

BarTensor build_l(const MplFamily& f, Space s) {
  if (s == Space::WN_z) throw std::invalid_argument("build_l: use M04N or M05N-xy");
  if (f.c.size() != f.e.size() || f.c.size() != f.var.size())
    throw std::invalid_argument("build_l: inconsistent family");
  for (int c : f.c)
    if (c < 1) throw std::invalid_argument("build_l: exponents must be >= 1");
  const int W = std::max(1, f.weight());
  LBuilder b(s, f.N, W);
  return BarTensor(s, f.N, b.get(f));
}

BarTensor build_l_onevar(const IndexPair& p) {
  require_nonempty(p);
  return build_l(family(p, 1), Space::M04N);
}
BarTensor build_l_x(const IndexPair& p) {
  require_nonempty(p);
  return build_l(family(p, 1), Space::M05N_xy);
}
BarTensor build_l_y(const IndexPair& p) {
  require_nonempty(p);
  return build_l(family(p, 2), Space::M05N_xy);
}
BarTensor build_l_xy(const IndexPair& p) {
  require_nonempty(p);
  return build_l(family(p, 3), Space::M05N_xy);
}
BarTensor build_l_twovar(const IndexPair& p, const IndexPair& q) {
  require_nonempty(p);
  require_nonempty(q);
  return build_l(concat(p, 1, q, 2), Space::M05N_xy);
}
BarTensor build_l_twovar_yx(const IndexPair& q, const IndexPair& p) {
  require_nonempty(p);
  require_nonempty(q);
  return build_l(concat(q, 2, p, 1), Space::M05N_xy);
}

BarTensor l_onevar_direct(const IndexPair& p) {
  require_nonempty(p);
  BarTensor b(Space::M04N, p.N, p.weight());
  b.add(l_word(p), p.depth() % 2 ? Rational(-1) : Rational(1));
  return b;
}

// --- pullbacks ---

std::vector<std::string> pullback_tags() {
  return {"p2", "p3", "p4", "i123", "i1234_div", "i234", "i1234_bar", "i1_2_34"};
}

namespace {

bool is_p_tag(const std::string& t) { return t == "p2" || t == "p3" || t == "p4"; }

std::string xf_blocks(const std::string& tag) {
  if (tag == "i123") return "1,2,3";
  if (tag == "i1234_div") return "1,23,4";
  if (tag == "i234") return "2,3,4";
  if (tag == "i1234_bar") return "12,3,4";
  if (tag == "i1_2_34") return "1,2,34";
  throw std::invalid_argument("unknown pullback tag '" + tag + "'");
}

// letter tables: source letter -> combination of target letters
std::vector<Combo> pullback_table(const std::string& tag, int N) {
  if (is_p_tag(tag)) {
    std::vector<Combo> t(N + 1);
    const Letter dx = 0, dy = static_cast<Letter>(N + 1);
    if (tag == "p4") t[0] = {{dx, 1}};
    if (tag == "p2") t[0] = {{dy, 1}};
    if (tag == "p3") t[0] = {{dx, 1}, {dy, 1}};
    for (int a = 0; a < N; ++a) {
      Letter tgt = tag == "p4" ? 1 + a : tag == "p2" ? N + 2 + a : 2 * N + 2 + a;
      t[1 + a] = {{tgt, 1}};
    }
    return t;
  }
  // dual of the embedding: <i^* b, w> = <b, i(w)>, letterwise since images are linear
  const std::string blocks = xf_blocks(tag);
  const bool f2 = tag == "i234";
  auto ims = xf_free_images(blocks, f2 ? XfVariant::TtoTN : XfVariant::TNtoTN, 4, N, 1);
  auto conv = t0_to_forms(N, 1);
  std::vector<Combo> t(3 * N + 2);
  for (std::size_t L = 0; L < ims.size(); ++L) {
    Series x = substitute(ims[L], conv);
    for (const auto& [w, c] : x.terms()) t[w[0]].emplace_back(static_cast<Letter>(L), c);
  }
  return t;
}

}  // namespace

std::vector<Series> pullback_algebra_images(const std::string& tag, int N, int D) {
  if (!is_p_tag(tag))
    return xf_free_images(xf_blocks(tag), tag == "i234" ? XfVariant::TtoTN : XfVariant::TNtoTN,
                          4, N, D);
  auto F = alphabet_fn1(N);
  auto G = t0_alphabet(N);
  std::vector<Series> im;
  for (int i = 0; i < G->size(); ++i) {
    const std::string& name = G->letter(static_cast<Letter>(i));
    Series s(F, D);
    auto is = [&](int a, int b, int c) { return name == t_letter_name(a, b, c, N); };
    if (is(1, 2, 0)) {
      if (tag != "p2") s.add({letter_A()}, 1);
    } else if (is(1, 3, 0)) {
      if (tag == "p2") s.add({letter_A()}, 1);
      if (tag == "p4") {
        // t12 + t13 + sum t23 is killed
        s.add({letter_A()}, -1);
        for (int c = 0; c < N; ++c) s.add({letter_B(c, N)}, -1);
      }
    } else {
      for (int a = 0; a < N; ++a) {
        if (is(2, 3, a) && tag == "p4") s.add({letter_B(a, N)}, 1);
        if (is(3, 4, a) && tag == "p2") s.add({letter_B(a, N)}, 1);
        if (is(2, 4, a) && tag == "p3") s.add({letter_B(a, N)}, 1);
      }
    }
    im.push_back(std::move(s));
  }
  return im;
}

BarTensor pullback(const std::string& tag, const BarTensor& b0) {
  const bool p = is_p_tag(tag);
  if (!p) xf_blocks(tag);  // validates the tag
  const int N = b0.N();
  BarTensor b = b0;
  if (p) {
    if (b.space() != Space::M04N) throw AlphabetMismatch("pullback " + tag + ": expects M04N");
  } else {
    if (b.space() == Space::WN_z) b = to_xy(b);
    if (b.space() != Space::M05N_xy)
      throw AlphabetMismatch("pullback " + tag + ": expects M05N-xy");
  }
  const auto table = pullback_table(tag, N);
  const Space tgt = p ? Space::M05N_xy : Space::M04N;
  const int Nt = tag == "i234" ? 1 : N;
  BarTensor out(tgt, Nt, std::max(1, b.series().maxdeg()));
  for (const auto& [w, c] : b.series().terms()) {
    std::vector<std::pair<Word, Rational>> acc{{Word{}, c}};
    for (Letter l : w) {
      std::vector<std::pair<Word, Rational>> next;
      for (const auto& [u, x] : acc)
        for (const auto& [m, y] : table[l]) {
          Word v = u;
          v.push_back(m);
          next.emplace_back(std::move(v), x * y);
        }
      acc = std::move(next);
      if (acc.empty()) break;
    }
    for (const auto& [u, x] : acc) out.add(u, x);
  }
  return out;
}

// --- series shuffle on the bar side ---

bool series_shuffle_bar_check(const IndexPair& p, const IndexPair& q) {
  if (p.N != q.N) throw std::invalid_argument("series shuffle: levels differ");
  if (p.depth() == 0 || q.depth() == 0) return true;
  BarTensor lhs = shuffle(build_l_x(p), build_l_y(q));
  const int k = p.depth(), l = q.depth();
  BarTensor rhs(Space::M05N_xy, p.N, p.weight() + q.weight());
  for (const auto& sig : enumerate_sh_leq(k, l)) {
    int M = 0;
    for (int s : sig) M = std::max(M, s + 1);
    MplFamily f;
    f.N = p.N;
    f.c.assign(M, 0);
    f.e.assign(M, 0);
    f.var.assign(M, 0);
    for (int i = 0; i < k + l; ++i) {
      const int s = sig[i];
      f.c[s] += i < k ? p.a[i] : q.a[i - k];
      f.e[s] = mod(f.e[s] + (i < k ? p.e[i] : q.e[i - k]), p.N);
    }
    f.var[sig[k - 1]] |= 1;
    f.var[sig[k + l - 1]] |= 2;
    rhs += build_l(f, Space::M05N_xy);
  }
  return lhs == rhs;
}

// --- lemma verification ---

namespace {

IndexPair cat(const IndexPair& p, const IndexPair& q) {
  IndexPair r = p;
  r.a.insert(r.a.end(), q.a.begin(), q.a.end());
  r.e.insert(r.e.end(), q.e.begin(), q.e.end());
  return r;
}

// bar elements are reused across many inputs; keep them (and their certification)
const BarTensor& cached(int kind, const IndexPair& p, const IndexPair& q) {
  static std::mutex mu;
  static std::map<std::tuple<int, IndexPair, IndexPair>, std::unique_ptr<BarTensor>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = memo[{kind, p, q}];
  if (!slot) {
    switch (kind) {
      case 0: slot = std::make_unique<BarTensor>(build_l_x(p)); break;
      case 1: slot = std::make_unique<BarTensor>(build_l_y(p)); break;
      case 2: slot = std::make_unique<BarTensor>(build_l_xy(p)); break;
      case 3: slot = std::make_unique<BarTensor>(build_l_twovar(p, q)); break;
      default: slot = std::make_unique<BarTensor>(build_l_twovar_yx(p, q)); break;
    }
    if (!slot->certified()) throw std::logic_error("lemma check: bar element is not a cocycle");
  }
  return *slot;
}

struct LemmaInput {
  int which, N, D;
  std::vector<Series> zphi;  // Z^n phi / n! in form letters, n = 0..D
  const Series* h;
};

LemmaInput prepare(int which, const Series& g, const Series& h, int D) {
  if (which < 3 || which > 6) throw std::invalid_argument("verify_lemma: lemma must be 3..6");
  const int N = h.alphabet().size() - 1;
  if (!h.alphabet().same_as(*alphabet_fn1(N)))
    throw AlphabetMismatch("verify_lemma: h must be over F_{N+1}");
  if (h.maxdeg() < D) throw TruncationMismatch("verify_lemma: h truncated below the weight");
  Series hd = h.with_maxdeg(D);
  if (hd.constant_term() != 1) throw std::invalid_argument("verify_lemma: c_0(h) != 1");
  if (hd.coeff({letter_A()}) != 0) throw std::invalid_argument("verify_lemma: c_A(h) != 0");
  if (which >= 5)
    for (int n = 1; n <= D; ++n)
      if (hd.coeff(Word(n, letter_B(0, N))) != 0)
        throw std::invalid_argument("verify_lemma: c_{B(0)^n}(h) != 0");
  const PentagonMaps& m = pentagon_maps(N, D);
  if (which == 4 || which == 6) {
    if (g.maxdeg() < D) throw TruncationMismatch("verify_lemma: g truncated below the weight");
    if (!residual_mixed_pentagon(g, h, N, D).is_zero())
      throw std::invalid_argument("verify_lemma: (g, h) does not satisfy the mixed pentagon");
  }
  Series phi = substitute(hd, m.h_1_23_4) * substitute(hd, m.h_1_2_3);
  auto conv = t0_to_forms(N, D);
  LemmaInput in{which, N, D, {}, &h};
  Series cur = substitute(phi, conv);
  in.zphi.push_back(cur);
  if (which == 5 || which == 6) {
    // Z = t23(0) + t24(0) + t34(0)
    Series Z(conv[0].alphabet_ptr(), D);
    auto G = t0_alphabet(N);
    for (auto [i, j] : {std::pair{2, 3}, {2, 4}, {3, 4}})
      Z += conv[G->at(t_letter_name(i, j, 0, N))];
    for (int n = 1; n <= D; ++n) {
      cur = Z * cur;
      cur *= Q(1, n);
      in.zphi.push_back(cur);
    }
  }
  return in;
}

TPoly pair_T(const BarTensor& b, const LemmaInput& in) {
  std::vector<Rational> c;
  for (const auto& x : in.zphi) c.push_back(pair_in_forms(b, x));
  return TPoly(std::move(c));
}

void check(LemmaReport& r, const std::string& what, const TPoly& lhs, const TPoly& rhs) {
  ++r.checked;
  if (!(lhs == rhs))
    r.failures.push_back(what + ": " + lhs.to_string() + " != " + rhs.to_string());
}

void one_var(LemmaReport& r, const LemmaInput& in, const IndexPair& p) {
  const bool T = in.which == 5;
  TPoly rhs = T ? l_I(*in.h, p) : TPoly(l_coeff(*in.h, p));
  const char* names[] = {"x", "y", "xy"};
  for (int k = 0; k < 3; ++k)
    check(r, "lemma" + std::to_string(in.which) + " " + names[k] + " " + p.to_string(),
          pair_T(cached(k, p, p), in), rhs);
}

void two_var(LemmaReport& r, const LemmaInput& in, const IndexPair& p, const IndexPair& q) {
  const std::string tag =
      "lemma" + std::to_string(in.which) + " " + p.to_string() + " | " + q.to_string();
  switch (in.which) {
    case 3: check(r, tag, pair_T(cached(3, p, q), in), TPoly(l_coeff(*in.h, cat(p, q)))); break;
    case 5: check(r, tag, pair_T(cached(3, p, q), in), l_I(*in.h, cat(p, q))); break;
    // q on y inside, p on x outside
    case 4:
    case 6: check(r, tag, pair_T(cached(4, q, p), in), TPoly(l_coeff(*in.h, cat(q, p)))); break;
  }
}

void require_admissible(int which, const IndexPair& p, const IndexPair& q) {
  if (which == 4 && (!p.admissible() || !q.admissible()))
    throw std::invalid_argument("verify_lemma: lemma 4 needs admissible pairs");
  if (which == 6 && !p.admissible())
    throw std::invalid_argument("verify_lemma: lemma 6 needs p admissible");
}

}  // namespace

LemmaReport verify_lemma(int which, const Series& g, const Series& h, const IndexPair& p,
                         const IndexPair& q) {
  require_nonempty(p);
  require_nonempty(q);
  require_admissible(which, p, q);
  LemmaInput in = prepare(which, g, h, p.weight() + q.weight());
  LemmaReport r;
  r.lemma = which;
  if (which == 3 || which == 5) one_var(r, in, p);
  two_var(r, in, p, q);
  return r;
}

LemmaReport verify_lemma_all(int which, const Series& g, const Series& h, int wmax) {
  LemmaInput in = prepare(which, g, h, wmax);
  LemmaReport r;
  r.lemma = which;
  const auto idx = enumerate_indices(in.N, wmax, false);
  if (which == 3 || which == 5)
    for (const auto& p : idx) one_var(r, in, p);
  for (const auto& p : idx)
    for (const auto& q : idx) {
      if (p.weight() + q.weight() > wmax) continue;
      if (which == 4 && (!p.admissible() || !q.admissible())) continue;
      if (which == 6 && !p.admissible()) continue;
      two_var(r, in, p, q);
    }
  return r;
}

Series random_lemma_input(int N, int D, std::uint64_t seed) {
  auto F = alphabet_fn1(N);
  LyndonBasis L(F, D);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-3, 3);
  Series psi(F, D);
  for (int d = 1; d <= D; ++d)
    for (const auto& w : L.words(d)) {
      if (d == 1 && (w[0] == letter_A() || w[0] == letter_B(0, N))) continue;
      Series p = L.bracket(w).with_maxdeg(D);
      p *= Q(num(rng), 2);
      psi += p;
    }
  return exp_series(psi);
}

}  // namespace penta
