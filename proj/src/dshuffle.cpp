#include "penta/dshuffle.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

namespace penta {

int IndexPair::weight() const {
  int w = 0;
  for (int x : a) w += x;
  return w;
}

bool IndexPair::admissible() const {
  return a.empty() || !(a.back() == 1 && mod(e.back(), N) == 0);
}

int IndexPair::trailing_ones() const {
  int t = 0;
  for (int i = depth() - 1; i >= 0 && a[i] == 1 && mod(e[i], N) == 0; --i) ++t;
  return t;
}

void IndexPair::validate() const {
  if (N < 1) throw std::invalid_argument("index: level must be >= 1");
  if (a.size() != e.size()) throw std::invalid_argument("index: a and e differ in length");
  for (int x : a)
    if (x < 1) throw std::invalid_argument("index: entries of a must be positive");
}

std::string IndexPair::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ';';
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << mod(e[i], N);
  os << '@' << N;
  return os.str();
}

bool IndexPair::operator<(const IndexPair& o) const {
  return std::tie(N, a, e) < std::tie(o.N, o.a, o.e);
}

namespace {
std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    int x = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("index: bad integer '" + tok + "'");
    v.push_back(x);
  }
  return v;
}
}  // namespace

IndexPair parse_index(const std::string& s) {
  IndexPair p;
  std::string body = s;
  auto at = s.find('@');
  try {
    if (at != std::string::npos) {
      p.N = std::stoi(s.substr(at + 1));
      body = s.substr(0, at);
    }
    auto semi = body.find(';');
    p.a = parse_ints(body.substr(0, semi));
    if (semi == std::string::npos)
      p.e.assign(p.a.size(), 0);
    else
      p.e = parse_ints(body.substr(semi + 1));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("index: cannot parse '" + s + "'");
  }
  p.validate();
  for (auto& x : p.e) x = mod(x, p.N);
  return p;
}

std::vector<IndexPair> enumerate_indices(int N, int maxw, bool admissible_only) {
  std::vector<IndexPair> out;
  std::vector<int> a;
  std::function<void(int)> comp = [&](int left) {
    if (!a.empty()) {
      // all root tuples
      std::vector<int> e(a.size(), 0);
      while (true) {
        IndexPair p{a, e, N};
        if (!admissible_only || p.admissible()) out.push_back(p);
        std::size_t i = 0;
        while (i < e.size() && ++e[i] == N) e[i++] = 0;
        if (i == e.size()) break;
      }
    }
    for (int x = 1; x <= left; ++x) {
      a.push_back(x);
      comp(left - x);
      a.pop_back();
    }
  };
  comp(maxw);
  std::sort(out.begin(), out.end(), [](const IndexPair& x, const IndexPair& y) {
    if (x.weight() != y.weight()) return x.weight() < y.weight();
    return x < y;
  });
  return out;
}

std::vector<std::vector<int>> enumerate_sh_leq(int k, int l) {
  if (k < 0 || l < 0) throw std::invalid_argument("enumerate_sh_leq: negative length");
  std::vector<std::vector<int>> out;
  std::vector<int> sigma(k + l);
  std::function<void(int, int, int)> rec = [&](int i, int j, int slot) {
    if (i == k && j == l) {
      out.push_back(sigma);
      return;
    }
    if (i < k) {
      sigma[i] = slot;
      rec(i + 1, j, slot + 1);
    }
    if (j < l) {
      sigma[k + j] = slot;
      rec(i, j + 1, slot + 1);
    }
    if (i < k && j < l) {
      sigma[i] = slot;
      sigma[k + j] = slot;
      rec(i + 1, j + 1, slot + 1);
    }
  };
  rec(0, 0, 0);
  return out;
}

std::vector<IndexPair> stuffle_indices(const IndexPair& p, const IndexPair& q) {
  if (p.N != q.N) throw std::invalid_argument("stuffle: level mismatch");
  const int k = p.depth(), l = q.depth();
  std::vector<IndexPair> out;
  for (const auto& s : enumerate_sh_leq(k, l)) {
    int M = 0;
    for (int x : s) M = std::max(M, x + 1);
    IndexPair r{std::vector<int>(M, 0), std::vector<int>(M, 0), p.N};
    for (int i = 0; i < k; ++i) {
      r.a[s[i]] += p.a[i];
      r.e[s[i]] += p.e[i];
    }
    for (int j = 0; j < l; ++j) {
      r.a[s[k + j]] += q.a[j];
      r.e[s[k + j]] += q.e[j];
    }
    for (auto& x : r.e) x = mod(x, p.N);
    out.push_back(std::move(r));
  }
  return out;
}

Word l_word(const IndexPair& p) {
  p.validate();
  Word w;
  int acc = 0;
  for (int i = p.depth() - 1; i >= 0; --i) {
    acc += p.e[i];
    for (int t = 1; t < p.a[i]; ++t) w.push_back(letter_A());
    w.push_back(letter_B(-acc, p.N));
  }
  return w;
}

Word y_word(const IndexPair& p) {
  p.validate();
  Word w;
  for (int i = p.depth() - 1; i >= 0; --i) w.push_back(letter_Y(p.a[i], p.e[i], p.N));
  return w;
}

namespace dsdetail {
bool split_blocks(const Word& w, std::vector<std::pair<int, int>>& blocks) {
  blocks.clear();
  int n = 1;
  for (Letter l : w) {
    if (l == letter_A()) {
      ++n;
    } else {
      blocks.emplace_back(n, static_cast<int>(l) - 1);
      n = 1;
    }
  }
  return n == 1;
}
}  // namespace dsdetail

Series embed_Y(const Series& y) {
  const Alphabet& Y = y.alphabet();
  if (Y.kind() != AlphabetKind::YN) throw AlphabetMismatch("embed_Y: expects a Y alphabet");
  const int N = Y.level();
  auto F = alphabet_fn1(N);
  std::vector<Series> ims;
  for (int i = 0; i < Y.size(); ++i) {
    const int n = Y.degree(static_cast<Letter>(i));
    const int a = i % N;
    Word w(n - 1, letter_A());
    w.push_back(letter_B(-a, N));
    ims.push_back(Series::word(F, y.maxdeg(), w, Rational(-1)));
  }
  return substitute(y, ims);
}

// --- TPoly ---

void TPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

TPoly& TPoly::operator+=(const TPoly& o) {
  if (o.c.size() > c.size()) c.resize(o.c.size(), Rational(0));
  for (std::size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
  trim();
  return *this;
}

TPoly& TPoly::operator-=(const TPoly& o) {
  if (o.c.size() > c.size()) c.resize(o.c.size(), Rational(0));
  for (std::size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
  trim();
  return *this;
}

TPoly TPoly::operator*(const TPoly& o) const {
  if (c.empty() || o.c.empty()) return TPoly();
  std::vector<Rational> r(c.size() + o.c.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
  return TPoly(std::move(r));
}

std::string TPoly::to_string() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c[i] == 0) continue;
    Rational x = c[i];
    if (first) {
      if (x < 0) os << '-';
    } else {
      os << (x < 0 ? " - " : " + ");
    }
    x = abs(x);
    if (i == 0 || x != 1) os << x.get_str() << (i ? "*" : "");
    if (i >= 1) os << 'T';
    if (i >= 2) os << '^' << i;
    first = false;
  }
  return os.str();
}

// --- regularized values ---

namespace {
void need_weight(const Series& h, const IndexPair& p) {
  if (p.weight() > h.maxdeg())
    throw TruncationMismatch("index " + p.to_string() + " has weight above the truncation " +
                             std::to_string(h.maxdeg()));
}
Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

TPoly l_I(const Series& h, const IndexPair& p) {
  need_weight(h, p);
  const Word w = l_word(p);
  const Letter b0 = letter_B(0, p.N);
  std::vector<Rational> out(w.size() + 1, Rational(0));
  for (std::size_t j = 0; j <= w.size(); ++j) {
    if (j > 0 && w[j - 1] != b0) break;
    Rational c = h.coeff(Word(w.begin() + static_cast<long>(j), w.end()));
    if (p.depth() % 2) c = -c;
    out[j] = c / factorial(static_cast<int>(j));
  }
  return TPoly(std::move(out));
}

SeriesRegularizer::SeriesRegularizer(Series h) : h_(std::move(h)) {}

TPoly SeriesRegularizer::value(const IndexPair& p) {
  if (p.depth() == 0) return TPoly(Rational(1));
  if (p.admissible()) {
    need_weight(h_, p);
    return TPoly(l_coeff(h_, p));
  }
  auto it = memo_.find(p);
  if (it != memo_.end()) return it->second;

  const int t = p.trailing_ones();
  const int k = p.depth() - t;
  IndexPair head{std::vector<int>(p.a.begin(), p.a.begin() + k),
                 std::vector<int>(p.e.begin(), p.e.begin() + k), p.N};
  IndexPair left, right;
  if (k == 0) {
    if (t == 1) return memo_[p] = TPoly(Rational(-1)) * TPoly::T();
    left = IndexPair{{1}, {0}, p.N};
    right = IndexPair{std::vector<int>(t - 1, 1), std::vector<int>(t - 1, 0), p.N};
  } else {
    left = head;
    right = IndexPair{std::vector<int>(t, 1), std::vector<int>(t, 0), p.N};
  }
  TPoly acc = value(left) * value(right);
  int count = 0;
  for (const auto& r : stuffle_indices(left, right)) {
    if (r == p)
      ++count;
    else
      acc -= value(r);
  }
  if (count == 0) throw std::logic_error("l_S: target missing from its own stuffle identity");
  for (auto& x : acc.c) x /= count;
  return memo_[p] = acc;
}

TPoly l_S(const Series& h, const IndexPair& p) {
  SeriesRegularizer r(h);
  return r.value(p);
}

LMap::LMap(const Series& h, int maxdeg) {
  const int N = h.alphabet().size() - 1;
  // G(u) = exp(-sum_n l_n u^n / n), via n g_n = sum_k k s_k g_{n-k}
  std::vector<Rational> s(maxdeg + 1, Rational(0)), g(maxdeg + 1, Rational(0));
  for (int n = 1; n <= maxdeg; ++n) {
    IndexPair p{{n}, {0}, N};
    need_weight(h, p);
    s[n] = -l_coeff(h, p) / n;
  }
  g[0] = 1;
  for (int n = 1; n <= maxdeg; ++n) {
    Rational v = 0;
    for (int k = 1; k <= n; ++k) v += k * s[k] * g[n - k];
    g[n] = v / n;
  }
  for (int n = 0; n <= maxdeg; ++n) {
    // n! [u^n] exp(Tu) G(u)
    std::vector<Rational> c(n + 1, Rational(0));
    for (int j = 0; j <= n; ++j) c[j] = factorial(n) / factorial(j) * g[n - j];
    pow_.emplace_back(std::move(c));
  }
}

TPoly LMap::operator()(const TPoly& x) const {
  if (x.degree() >= static_cast<int>(pow_.size()))
    throw std::invalid_argument("L: polynomial degree above the map's range");
  TPoly r;
  for (int i = 0; i <= x.degree(); ++i) {
    if (x.c[i] == 0) continue;
    r += TPoly(x.c[i]) * pow_[i];
  }
  return r;
}

bool regularization_check(const Series& h, const IndexPair& p) {
  LMap L(h, p.weight());
  return l_S(h, p) == L(l_I(h, p));
}

Rational stuffle_defect(const Series& h, const IndexPair& p, const IndexPair& q) {
  need_weight(h, IndexPair{{p.weight() + q.weight()}, {0}, p.N});
  Rational d = l_coeff(h, p) * l_coeff(h, q);
  for (const auto& r : stuffle_indices(p, q)) d -= l_coeff(h, r);
  return d;
}

TPoly stuffle_defect_S(SeriesRegularizer& reg, const IndexPair& p, const IndexPair& q) {
  TPoly d = reg.value(p) * reg.value(q);
  for (const auto& r : stuffle_indices(p, q)) d -= reg.value(r);
  return d;
}

std::vector<NormalizationLine> check_dmr_normalizations(const Series& h, int a, const Rational& mu,
                                                        int N) {
  if (N < 1) throw std::invalid_argument("normalizations: N must be >= 1");
  if (h.alphabet().size() != N + 1) throw AlphabetMismatch("normalizations: level mismatch");
  auto cB = [&](int x) { return h.coeff(Word{letter_B(x, N)}); };
  std::vector<NormalizationLine> out;
  if (N >= 3) {
    const Rational base = cB(a) - cB(-a);
    for (int k = 1; 2 * k <= N; ++k) {
      Rational lhs = cB(k * a) - cB(-k * a);
      Rational rhs = Q(N - 2 * k, N - 2) * base;
      out.push_back({"normalization1[k=" + std::to_string(k) + "]", lhs, rhs, lhs == rhs});
    }
    Rational lhs = cB(a) - cB(-a);
    Rational rhs = -Q(N - 2, 2 * N) * mu;
    out.push_back({"normalization2", lhs, rhs, lhs == rhs});
  } else {
    Rational lhs = h.coeff(Word{letter_A(), letter_B(0, N)});
    Rational rhs = mu * mu / 24;
    out.push_back({"normalization2", lhs, rhs, lhs == rhs});
  }
  return out;
}

}  // namespace penta
