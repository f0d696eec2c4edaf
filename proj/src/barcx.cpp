#include "penta/barcx.hpp"

#include <mutex>
#include <sstream>
#include <unordered_map>

namespace penta {

std::string space_name(Space s) {
  switch (s) {
    case Space::M04N: return "M04N";
    case Space::M05N_xy: return "M05N-xy";
    case Space::WN_z: return "WN-z";
  }
  return "?";
}

Space parse_space(const std::string& s) {
  for (Space x : {Space::M04N, Space::M05N_xy, Space::WN_z})
    if (space_name(x) == s) return x;
  throw std::invalid_argument("unknown space '" + s + "'");
}

namespace {

// letter layout on M05N-xy
Letter xy_dx() { return 0; }
Letter xy_dxa(int a, int N) { return static_cast<Letter>(1 + mod(a, N)); }
Letter xy_dy(int N) { return static_cast<Letter>(N + 1); }
Letter xy_dya(int a, int N) { return static_cast<Letter>(N + 2 + mod(a, N)); }
Letter xy_dxya(int a, int N) { return static_cast<Letter>(2 * N + 2 + mod(a, N)); }

// and on WN-z: w12, w13, w14, then w23@a, w24@a, w34@a
Letter z_w1(int i) { return static_cast<Letter>(i - 2); }
Letter z_wij(int i, int j, int a, int N) {
  int blk = (i == 2 && j == 3) ? 0 : (i == 2 && j == 4) ? 1 : 2;
  return static_cast<Letter>(3 + blk * N + mod(a, N));
}

std::vector<std::string> form_letters(Space s, int N) {
  std::vector<std::string> v;
  auto at = [](const std::string& b, int a) { return b + "@" + std::to_string(a); };
  switch (s) {
    case Space::M04N:
      v.push_back("dz");
      for (int a = 0; a < N; ++a) v.push_back(at("dz", a));
      break;
    case Space::M05N_xy:
      v.push_back("dx");
      for (int a = 0; a < N; ++a) v.push_back(at("dx", a));
      v.push_back("dy");
      for (int a = 0; a < N; ++a) v.push_back(at("dy", a));
      for (int a = 0; a < N; ++a) v.push_back(at("dxy", a));
      break;
    case Space::WN_z:
      v = {"w12", "w13", "w14"};
      for (const char* b : {"w23", "w24", "w34"})
        for (int a = 0; a < N; ++a) v.push_back(at(b, a));
      break;
  }
  return v;
}

// dense RREF over Q; returns pivot columns
std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& m) {
  std::vector<std::size_t> piv;
  if (m.empty()) return piv;
  const std::size_t nc = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < m.size(); ++c) {
    std::size_t k = r;
    while (k < m.size() && m[k][c] == 0) ++k;
    if (k == m.size()) continue;
    std::swap(m[r], m[k]);
    const Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t j = 0; j < nc; ++j)
        if (m[r][j] != 0) m[i][j] -= f * m[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  m.resize(r);
  return piv;
}

}  // namespace

AlphabetPtr form_alphabet(Space s, int N) {
  if (N < 1) throw std::invalid_argument("form_alphabet: N must be >= 1");
  static std::mutex mu;
  static std::map<std::pair<int, int>, AlphabetPtr> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = memo[{static_cast<int>(s), N}];
  if (!slot) {
    auto v = form_letters(s, N);
    slot = alphabet_custom(space_name(s) + "/" + std::to_string(N), v,
                           std::vector<int>(v.size(), 1), N);
  }
  return slot;
}

OneForm OneForm::parse(Space s, int N, const std::string& sym) {
  auto a = form_alphabet(s, N);
  auto l = a->find(sym);
  if (!l) throw std::invalid_argument("unknown one-form '" + sym + "' on " + space_name(s));
  return {s, N, *l};
}

std::string OneForm::symbol() const { return form_alphabet(space, N)->letter(letter); }

// --- BarTensor ---

BarTensor::BarTensor(Space s, int N, int maxw)
    : space_(s), N_(N), s_(form_alphabet(s, N), maxw) {}

BarTensor::BarTensor(Space s, int N, Series terms) : space_(s), N_(N), s_(std::move(terms)) {
  if (!s_.alphabet().same_as(*form_alphabet(s, N)))
    throw AlphabetMismatch("BarTensor: series is not over the forms of " + space_name(s));
}

BarTensor& BarTensor::operator=(const BarTensor& o) {
  space_ = o.space_;
  N_ = o.N_;
  s_ = o.s_;
  cert_.store(o.cert_.load());
  return *this;
}

BarTensor BarTensor::one(Space s, int N, int maxw) {
  BarTensor b(s, N, maxw);
  b.s_.add(Word{}, Rational(1));
  return b;
}

BarTensor BarTensor::word(Space s, int N, const std::vector<std::string>& syms,
                          const Rational& c) {
  BarTensor b(s, N, static_cast<int>(syms.size()));
  Word w;
  for (const auto& x : syms) w.push_back(OneForm::parse(s, N, x).letter);
  b.s_.add(w, c);
  return b;
}

int BarTensor::max_weight() const {
  int m = 0;
  for (const auto& [w, c] : s_.terms()) m = std::max(m, static_cast<int>(w.size()));
  return m;
}

Rational BarTensor::coeff(const std::vector<std::string>& syms) const {
  Word w;
  for (const auto& x : syms) w.push_back(OneForm::parse(space_, N_, x).letter);
  return s_.coeff(w);
}

void BarTensor::add(const Word& w, const Rational& c) {
  if (static_cast<int>(w.size()) > s_.maxdeg()) s_ = s_.with_maxdeg(static_cast<int>(w.size()));
  s_.add(w, c);
  cert_ = 0;
}

void BarTensor::check_same(const BarTensor& o) const {
  if (space_ != o.space_ || N_ != o.N_)
    throw AlphabetMismatch("bar tensors on different spaces: " + space_name(space_) + "/" +
                           std::to_string(N_) + " vs " + space_name(o.space_) + "/" +
                           std::to_string(o.N_));
}

BarTensor& BarTensor::operator+=(const BarTensor& o) {
  check_same(o);
  const int D = std::max(s_.maxdeg(), o.s_.maxdeg());
  s_ = s_.with_maxdeg(D);
  s_ += o.s_.with_maxdeg(D);
  cert_ = 0;
  return *this;
}

BarTensor& BarTensor::operator-=(const BarTensor& o) {
  check_same(o);
  const int D = std::max(s_.maxdeg(), o.s_.maxdeg());
  s_ = s_.with_maxdeg(D);
  s_ -= o.s_.with_maxdeg(D);
  cert_ = 0;
  return *this;
}

BarTensor& BarTensor::operator*=(const Rational& c) {
  s_ *= c;
  cert_ = 0;
  return *this;
}

bool BarTensor::operator==(const BarTensor& o) const {
  return space_ == o.space_ && N_ == o.N_ && s_.terms() == o.s_.terms();
}

std::string BarTensor::to_string() const {
  if (s_.is_zero()) return "0";
  std::string out;
  for (const auto& [w, c] : s_.terms()) {
    if (!out.empty()) out += " + ";
    out += c.get_str() + "*[";
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += "|";
      out += s_.alphabet().letter(w[i]);
    }
    out += "]";
  }
  return out;
}

BarTensor shuffle(const BarTensor& a, const BarTensor& b) {
  if (a.space() != b.space() || a.N() != b.N())
    throw AlphabetMismatch("shuffle: bar tensors on different spaces");
  const int D = a.series().maxdeg() + b.series().maxdeg();
  return BarTensor(a.space(), a.N(),
                   shuffle_mul(a.series().with_maxdeg(D), b.series().with_maxdeg(D)));
}

// --- identification with t0_{4,N} ---

std::vector<Series> t0_to_forms(int N, int D) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<Series>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find({N, D});
  if (it != memo.end()) return it->second;

  Presentation P = build_t0(4, N);
  auto F = form_alphabet(Space::M05N_xy, N);
  std::vector<Series> ims;
  for (int i = 0; i < P.gens->size(); ++i) {
    const std::string& name = P.gens->letter(static_cast<Letter>(i));
    Series s(F, D);
    auto is = [&](int a, int b, int c) { return name == t_letter_name(a, b, c, N); };
    bool done = false;
    if (is(1, 2, 0)) {
      s.add({xy_dx()}, 1);
      done = true;
    } else if (is(1, 3, 0)) {
      // t13 = X_dy - X_dx - sum_c X_dx@c
      s.add({xy_dy(N)}, 1);
      s.add({xy_dx()}, -1);
      for (int c = 0; c < N; ++c) s.add({xy_dxa(c, N)}, -1);
      done = true;
    }
    for (int a = 0; a < N && !done; ++a) {
      if (is(2, 3, a)) s.add({xy_dxa(a, N)}, 1), done = true;
      else if (is(2, 4, a)) s.add({xy_dxya(a, N)}, 1), done = true;
      else if (is(3, 4, a)) s.add({xy_dya(a, N)}, 1), done = true;
    }
    if (!done) throw std::logic_error("t0_to_forms: unexpected generator " + name);
    ims.push_back(std::move(s));
  }
  memo[{N, D}] = ims;
  return ims;
}

BarTensor to_xy(const BarTensor& b) {
  if (b.space() == Space::M05N_xy) return b;
  if (b.space() != Space::WN_z) throw AlphabetMismatch("to_xy: expects WN-z");
  const int N = b.N();
  const int D = std::max(1, b.series().maxdeg());
  auto F = form_alphabet(Space::M05N_xy, N);
  std::vector<Series> im(3 + 3 * N, Series(F, D));
  im[z_w1(2)].add({xy_dx()}, 1);  // z2 = xy
  im[z_w1(2)].add({xy_dy(N)}, 1);
  im[z_w1(3)].add({xy_dy(N)}, 1);  // z3 = y; z4 = 1 so w14 -> 0
  for (int a = 0; a < N; ++a) {
    im[z_wij(2, 3, a, N)].add({xy_dy(N)}, 1);  // xy - zeta^a y
    im[z_wij(2, 3, a, N)].add({xy_dxa(a, N)}, 1);
    im[z_wij(2, 4, a, N)].add({xy_dxya(a, N)}, 1);
    im[z_wij(3, 4, a, N)].add({xy_dya(a, N)}, 1);
  }
  return BarTensor(Space::M05N_xy, N, substitute(b.series().with_maxdeg(D), im));
}

BarTensor to_z(const BarTensor& b) {
  if (b.space() == Space::WN_z) return b;
  if (b.space() != Space::M05N_xy) throw AlphabetMismatch("to_z: expects M05N-xy");
  const int N = b.N();
  const int D = std::max(1, b.series().maxdeg());
  auto F = form_alphabet(Space::WN_z, N);
  std::vector<Series> im(3 * N + 2, Series(F, D));
  im[xy_dx()].add({z_w1(2)}, 1);
  im[xy_dx()].add({z_w1(3)}, -1);
  im[xy_dy(N)].add({z_w1(3)}, 1);
  for (int a = 0; a < N; ++a) {
    im[xy_dxa(a, N)].add({z_wij(2, 3, a, N)}, 1);
    im[xy_dxa(a, N)].add({z_w1(3)}, -1);
    im[xy_dya(a, N)].add({z_wij(3, 4, a, N)}, 1);
    im[xy_dxya(a, N)].add({z_wij(2, 4, a, N)}, 1);
  }
  return BarTensor(Space::WN_z, N, substitute(b.series().with_maxdeg(D), im));
}

// --- OS model ---

const OSAlgebra& OSAlgebra::get(Space s, int N) {
  if (s == Space::WN_z) s = Space::M05N_xy;
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<OSAlgebra>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = memo[{static_cast<int>(s), N}];
  if (!slot) slot.reset(new OSAlgebra(s, N));
  return *slot;
}

OSAlgebra::OSAlgebra(Space s, int N) {
  auto F = form_alphabet(s, N);
  n_ = F->size();
  if (s == Space::M04N) return;  // free: no relations
  Presentation P = build_t0(4, N);
  auto ims = t0_to_forms(N, 2);
  std::vector<std::vector<Rational>> m;
  for (const auto& r : P.relations) {
    Series x = substitute(r.with_maxdeg(2), ims);
    std::vector<Rational> row(static_cast<std::size_t>(n_ * n_), Rational(0));
    for (const auto& [w, c] : x.terms()) {
      if (w.size() != 2) throw std::logic_error("OSAlgebra: relation not quadratic");
      row[static_cast<std::size_t>(w[0] * n_ + w[1])] = c;
    }
    m.push_back(std::move(row));
  }
  rref(m);
  for (const auto& row : m) {
    Series x(F, 2);
    for (int i = 0; i < n_ * n_; ++i)
      if (row[i] != 0) x.add({static_cast<Letter>(i / n_), static_cast<Letter>(i % n_)}, row[i]);
    rel_.push_back(std::move(x));
  }
}

std::vector<Rational> OSAlgebra::wedge(Letter f, Letter g) const {
  std::vector<Rational> v;
  v.reserve(rel_.size());
  for (const auto& r : rel_) v.push_back(r.coeff({f, g}));
  return v;
}

std::vector<std::map<std::pair<Letter, Letter>, Rational>> OSAlgebra::relation_span() const {
  // kernel of the matrix (k, (i<j)) -> r_k(i, j)
  std::vector<std::pair<Letter, Letter>> cols;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) cols.emplace_back(i, j);
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rel_) {
    std::vector<Rational> row;
    for (auto [i, j] : cols) row.push_back(r.coeff({i, j}));
    m.push_back(std::move(row));
  }
  std::vector<std::size_t> piv = rref(m);
  std::vector<bool> is_piv(cols.size(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::map<std::pair<Letter, Letter>, Rational>> out;
  for (std::size_t f = 0; f < cols.size(); ++f) {
    if (is_piv[f]) continue;
    std::map<std::pair<Letter, Letter>, Rational> v;
    v[cols[f]] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k)
      if (m[k][f] != 0) v[cols[piv[k]]] = -m[k][f];
    out.push_back(std::move(v));
  }
  return out;
}

D2Residual d2_residual(const BarTensor& b0) {
  D2Residual out;
  if (b0.space() == Space::M04N) return out;
  const BarTensor b = to_xy(b0);
  const OSAlgebra& os = OSAlgebra::get(Space::M05N_xy, b.N());
  const int n = os.dim1();
  std::vector<std::vector<std::pair<int, Rational>>> tab(static_cast<std::size_t>(n * n));
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g) {
      auto v = os.wedge(static_cast<Letter>(f), static_cast<Letter>(g));
      for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k] != 0) tab[static_cast<std::size_t>(f * n + g)].emplace_back(static_cast<int>(k), v[k]);
    }
  for (const auto& [w, c] : b.series().terms()) {
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
      for (const auto& [k, r] : tab[static_cast<std::size_t>(w[j] * n + w[j + 1])]) {
        auto key = std::make_tuple(Word(w.begin(), w.begin() + static_cast<long>(j)), k,
                                   Word(w.begin() + static_cast<long>(j) + 2, w.end()));
        Rational& slot = out.terms[key];
        slot += c * r;
        if (slot == 0) out.terms.erase(key);
      }
  }
  return out;
}

namespace {

// ideal rows of t0_{4,N} at degree d, rewritten in form words
const std::vector<std::vector<std::pair<Word, Rational>>>& ideal_rows_in_forms(int N, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::vector<std::pair<Word, Rational>>>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find({N, d});
  if (it != memo.end()) return it->second;
  auto q = quotient(build_t0(4, N), d);
  auto ims = t0_to_forms(N, d);
  std::vector<std::vector<std::pair<Word, Rational>>> rows;
  for (const auto& row : q->ideal_component(d).rows) {
    Series x(q->alphabet(), d);
    for (std::size_t k = 0; k < row.cols.size(); ++k) x.add(q->word_of(row.cols[k], d), row.vals[k]);
    Series y = substitute(x, ims);
    std::vector<std::pair<Word, Rational>> r(y.terms().begin(), y.terms().end());
    rows.push_back(std::move(r));
  }
  return memo[{N, d}] = std::move(rows);
}

}  // namespace

bool BarTensor::certified() const {
  int st = cert_.load();
  if (st) return st == 1;
  bool ok = true;
  if (space_ != Space::M04N) {
    ok = d2_residual(*this).is_zero();
    const BarTensor b = to_xy(*this);
    for (int d = 2; ok && d <= b.max_weight(); ++d)
      for (const auto& row : ideal_rows_in_forms(N_, d)) {
        Rational v = 0;
        for (const auto& [w, c] : row) v += c * b.series().coeff(w);
        if (v != 0) {
          ok = false;
          break;
        }
      }
  }
  cert_.store(ok ? 1 : 2);
  return ok;
}

AlphabetPtr t0_alphabet(int N) {
  static std::mutex mu;
  static std::map<int, AlphabetPtr> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = memo[N];
  if (!slot) slot = build_t0(4, N).gens;
  return slot;
}

namespace bcdetail {
void require_phi_alphabet(const BarTensor& b, const Alphabet& a) {
  if (b.space() == Space::M04N) {
    if (!a.same_as(*alphabet_fn1(b.N())))
      throw AlphabetMismatch("pair: M04N tensors pair with series over F_{N+1}");
    return;
  }
  if (b.space() != Space::M05N_xy)
    throw AlphabetMismatch("pair: convert WN-z tensors with to_xy first");
  if (!a.same_as(*t0_alphabet(b.N())))
    throw AlphabetMismatch("pair: M05N-xy tensors pair with series over the t0_{4,N} generators");
}
}  // namespace bcdetail

}  // namespace penta
