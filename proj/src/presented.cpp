#include "penta/presented.hpp"

#include <cstdio>
#include <mutex>
#include <sstream>

#include "penta/cache.hpp"

namespace penta {

std::string t_letter_name(int i, int j, int a, int N) {
  std::string s = "t" + std::to_string(i) + std::to_string(j);
  if (i == 1 || N == 1) return s;
  return s + "@" + std::to_string(mod(a, N));
}

std::string Presentation::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  feed(tag);
  feed(std::to_string(n) + "/" + std::to_string(N));
  for (const auto& l : gens->letters()) feed(l);
  for (const auto& r : relations) feed(r.to_string());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

AlphabetPtr t_alphabet(int n, int N, bool reduced) {
  std::vector<std::string> l;
  int last1 = reduced ? n - 1 : n;
  for (int j = 2; j <= last1; ++j) l.push_back(t_letter_name(1, j, 0, N));
  for (int i = 2; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int a = 0; a < N; ++a) l.push_back(t_letter_name(i, j, a, N));
  std::string name = std::string(reduced ? "t0_" : "t_") + std::to_string(n) + "," + std::to_string(N);
  return std::make_shared<Alphabet>(AlphabetKind::FreeLift, name, l, std::vector<int>{}, N);
}

Series comm(const Series& x, const Series& y) { return concat_mul(x, y) - concat_mul(y, x); }

void add_t_relations(Presentation& P) {
  const int n = P.n, N = P.N;
  auto T = [&](int i, int j, int a) { return t_elem(P, 2, i, j, a); };
  auto Tsum = [&](int i, int j) { return t_sum(P, 2, i, j); };
  std::vector<Series> rel;
  for (int i = 2; i <= n; ++i)
    for (int j = 2; j <= n; ++j) {
      if (i == j) continue;
      for (int k = 2; k <= n; ++k) {
        if (k == i || k == j) continue;
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b)
            rel.push_back(comm(T(i, j, a), T(i, k, a + b) + T(j, k, b)));
      }
      for (int a = 0; a < N; ++a) rel.push_back(comm(T(1, i, 0) + T(1, j, 0) + Tsum(i, j), T(i, j, a)));
      rel.push_back(comm(T(1, i, 0), T(1, j, 0) + Tsum(i, j)));
      for (int k = 2; k <= n; ++k) {
        if (k == i || k == j || j > k) continue;
        for (int a = 0; a < N; ++a) rel.push_back(comm(T(1, i, 0), T(j, k, a)));
      }
    }
  for (int i = 2; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = 2; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          if (k == i || k == j || l == i || l == j) continue;
          if (std::make_pair(i, j) > std::make_pair(k, l)) continue;
          for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) rel.push_back(comm(T(i, j, a), T(k, l, b)));
        }
  for (auto& r : rel)
    if (!r.is_zero()) P.relations.push_back(std::move(r));
}

}  // namespace

Presentation build_t(int n, int N) {
  if (n < 2 || N < 1) throw std::invalid_argument("build_t: need n >= 2, N >= 1");
  Presentation P{"t_{n,N}", n, N, t_alphabet(n, N, false), {}};
  add_t_relations(P);
  return P;
}

Presentation build_t0(int n, int N) {
  if (n < 3 || N < 1) throw std::invalid_argument("build_t0: need n >= 3, N >= 1");
  Presentation P{"t0_{n,N}", n, N, t_alphabet(n, N, true), {}};
  add_t_relations(P);
  return P;
}

Presentation free_presentation(AlphabetPtr a) { return Presentation{"free", 0, a->level(), a, {}}; }

Series t_elem(const Presentation& P, int D, int i, int j, int a) {
  if (P.tag != "t_{n,N}" && P.tag != "t0_{n,N}")
    throw std::invalid_argument("t_elem: not a t-presentation");
  if (i == j || i < 1 || j < 1 || i > P.n || j > P.n)
    throw std::invalid_argument("t_elem: bad index pair");
  if (j == 1) std::swap(i, j);
  if (i > j) return t_elem(P, D, j, i, -a);
  if (i == 1 && P.reduced() && j == P.n) {
    Series s(P.gens, D);
    for (int k = 2; k < P.n; ++k) s -= t_elem(P, D, 1, k, 0);
    for (int p = 2; p <= P.n; ++p)
      for (int q = p + 1; q <= P.n; ++q) s -= t_sum(P, D, p, q);
    return s;
  }
  return Series::letter(P.gens, D, P.gens->at(t_letter_name(i, j, a, P.N)));
}

Series t_sum(const Presentation& P, int D, int i, int j) {
  Series s(P.gens, D);
  for (int c = 0; c < P.N; ++c) s += t_elem(P, D, i, j, c);
  return s;
}

Series central_z(const Presentation& P, int D) {
  Series s(P.gens, D);
  for (int j = 2; j <= P.n; ++j) s += t_elem(P, D, 1, j, 0);
  for (int i = 2; i <= P.n; ++i)
    for (int j = i + 1; j <= P.n; ++j) s += t_sum(P, D, i, j);
  return s;
}

// ---------------- quotient ----------------

QuotientAlgebra::QuotientAlgebra(Presentation p, int D, bool parallel)
    : P_(std::move(p)), D_(D), n_(P_.gens->size()) {
  if (!P_.gens->uniform_degree_one())
    throw std::invalid_argument("QuotientAlgebra: generators must have degree 1");
  for (const auto& r : P_.relations)
    for (const auto& [w, c] : r.terms())
      if (w.size() != 2) throw std::invalid_argument("QuotientAlgebra: relation not quadratic");
  E_.resize(D_ + 1);
  normal_.resize(D_ + 1);
  from_cache_.assign(D_ + 1, false);
  for (int d = 0; d <= D_; ++d) build_degree(d, parallel);
}

std::uint64_t QuotientAlgebra::free_dim(int d) const {
  std::uint64_t r = 1;
  for (int i = 0; i < d; ++i) r *= static_cast<std::uint64_t>(n_);
  return r;
}

std::uint64_t QuotientAlgebra::rank_of(const Word& w) const {
  std::uint64_t r = 0;
  for (Letter c : w) r = r * static_cast<std::uint64_t>(n_) + c;
  return r;
}

Word QuotientAlgebra::word_of(std::uint64_t r, int d) const {
  Word w(d);
  for (int i = d - 1; i >= 0; --i) {
    w[i] = static_cast<Letter>(r % static_cast<std::uint64_t>(n_));
    r /= static_cast<std::uint64_t>(n_);
  }
  return w;
}

void QuotientAlgebra::build_degree(int d, bool parallel) {
  const std::uint64_t n = static_cast<std::uint64_t>(n_);
  if (d == 0) {
    normal_[0] = {0};
    return;
  }
  if (d == 1) {
    for (std::uint64_t x = 0; x < n; ++x) normal_[1].push_back(x);
    return;
  }
  const std::string key = P_.hash();
  Echelon e;
  if (cache::load(key, d, e)) {
    from_cache_[d] = true;
  } else {
    std::vector<SparseRow> rows;
    if (d == 2) {
      for (const auto& r : P_.relations) {
        std::map<std::uint64_t, Rational> m;
        for (const auto& [w, c] : r.terms()) m[rank_of(w)] += c;
        SparseRow row;
        for (auto& [k, v] : m)
          if (sgn(v) != 0) {
            row.cols.push_back(k);
            row.vals.push_back(v);
          }
        if (!row.empty()) rows.push_back(std::move(row));
      }
    } else {
      const Echelon& prev = E_[d - 1];
      for (std::uint64_t u : normal_[d - 2]) {
        for (const auto& rel : E_[2].rows) {
          std::map<std::uint64_t, Rational> m;
          for (std::size_t k = 0; k < rel.cols.size(); ++k) {
            std::uint64_t a = rel.cols[k] / n, b = rel.cols[k] % n;
            std::uint64_t ua = u * n + a;
            auto it = prev.pivot.find(ua);
            if (it == prev.pivot.end()) {
              m[ua * n + b] += rel.vals[k];
            } else {
              const SparseRow& pr = prev.rows[it->second];
              for (std::size_t q = 0; q + 1 < pr.cols.size(); ++q)
                m[pr.cols[q] * n + b] -= rel.vals[k] * pr.vals[q];
            }
          }
          SparseRow row;
          for (auto& [k, v] : m)
            if (sgn(v) != 0) {
              row.cols.push_back(k);
              row.vals.push_back(v);
            }
          if (!row.empty()) rows.push_back(std::move(row));
        }
      }
    }
    e = parallel ? echelon_omp(std::move(rows)) : echelon_serial(std::move(rows));
    cache::store(key, d, e);
  }
  std::vector<std::uint64_t>& nw = normal_[d];
  for (std::uint64_t m : normal_[d - 1])
    for (std::uint64_t x = 0; x < n; ++x)
      if (!e.is_pivot(m * n + x)) nw.push_back(m * n + x);
  E_[d] = std::move(e);
}

std::shared_ptr<const QuotientAlgebra> quotient(const Presentation& p, int D) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const QuotientAlgebra>> memo;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = memo[p.hash()];
  if (!slot || slot->maxdeg() < D) slot = std::make_shared<QuotientAlgebra>(p, D);
  return slot;
}

// ---------------- morphisms ----------------

bool check_morphism(const Morphism& m) {
  if (static_cast<int>(m.images.size()) != m.src.gens->size()) return false;
  auto q = quotient(m.tgt, 2);
  for (const auto& r : m.src.relations) {
    Series img = m.apply(r.with_maxdeg(std::max(2, m.D))).with_maxdeg(2);
    if (!q->normal_form(img).is_zero()) return false;
  }
  return true;
}

namespace {

std::vector<std::vector<int>> parse_blocks(const std::string& s, int n_target) {
  std::vector<std::vector<int>> out;
  std::vector<int> seen(n_target + 1, 0);
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("build_xf: empty block in '" + s + "'");
    std::vector<int> blk;
    for (char ch : tok) {
      if (ch < '1' || ch > '9') throw std::invalid_argument("build_xf: bad block '" + tok + "'");
      int v = ch - '0';
      if (v > n_target) throw std::invalid_argument("build_xf: index outside codomain");
      if (seen[v]++) throw std::invalid_argument("build_xf: index repeated");
      blk.push_back(v);
    }
    out.push_back(blk);
  }
  if (out.size() < 2) throw std::invalid_argument("build_xf: need at least two blocks");
  return out;
}

// Decode a t-generator letter name into (i, j, a).
void decode(const std::string& name, int& i, int& j, int& a) {
  i = name[1] - '0';
  j = name[2] - '0';
  a = 0;
  auto at = name.find('@');
  if (at != std::string::npos) a = std::stoi(name.substr(at + 1));
}

}  // namespace

Morphism build_xf(const std::string& blocks, XfVariant v, int n_target, int N, int D,
                  bool reduced_target) {
  auto B = parse_blocks(blocks, n_target);
  const int m = static_cast<int>(B.size());
  const int Nsrc = v == XfVariant::TNtoTN ? N : 1;
  const int Ntgt = v == XfVariant::TtoT ? 1 : N;
  Morphism mor;
  mor.src = build_t(m, Nsrc);
  mor.tgt = reduced_target ? build_t0(n_target, Ntgt) : build_t(n_target, Ntgt);
  mor.D = D;
  const Presentation& T = mor.tgt;
  if (v == XfVariant::TNtoTN) {
    bool has1 = false;
    for (int x : B[0]) has1 |= (x == 1);
    if (!has1) throw std::invalid_argument("build_xf: variant tN->tN needs 1 in f^{-1}(1)");
  }
  for (const auto& name : mor.src.gens->letters()) {
    int i, j, a;
    decode(name, i, j, a);
    Series img(T.gens, D);
    if (v == XfVariant::TNtoTN && i == 1) {
      for (int jp : B[j - 1]) img += t_elem(T, D, 1, jp, 0);
      const auto& Bj = B[j - 1];
      for (std::size_t p = 0; p < Bj.size(); ++p)
        for (std::size_t q = p + 1; q < Bj.size(); ++q) img += t_sum(T, D, Bj[p], Bj[q]);
      for (int ip : B[0]) {
        if (ip == 1) continue;
        for (int jp : Bj) img += t_sum(T, D, ip, jp);
      }
    } else {
      int aa = v == XfVariant::TNtoTN ? a : 0;
      for (int ip : B[i - 1])
        for (int jp : B[j - 1]) img += t_elem(T, D, ip, jp, aa);
    }
    mor.images.push_back(std::move(img));
  }
  return mor;
}

std::vector<Series> xf_free_images(const std::string& blocks, XfVariant v, int n_target, int N,
                                   int D) {
  Morphism m = build_xf(blocks, v, n_target, N, D, true);
  const Alphabet& s = *m.src.gens;
  const int Ns = m.src.N;
  std::vector<Series> out{m.images[s.at(t_letter_name(1, 2, 0, Ns))]};
  if (v == XfVariant::TNtoTN) {
    for (int a = 0; a < N; ++a) out.push_back(m.images[s.at(t_letter_name(2, 3, a, Ns))]);
  } else {
    out.push_back(m.images[s.at(t_letter_name(2, 3, 0, Ns))]);
  }
  return out;
}

namespace {
void check_divisor(int N, int Np) {
  if (Np < 1 || N % Np != 0) throw std::invalid_argument("N' must divide N");
}
}  // namespace

Morphism pi_NN(int n, int N, int Np, int D) {
  check_divisor(N, Np);
  Morphism m{build_t(n, N), build_t(n, Np), {}, D};
  const int d = N / Np;
  for (const auto& name : m.src.gens->letters()) {
    int i, j, a;
    decode(name, i, j, a);
    if (i == 1)
      m.images.push_back(t_elem(m.tgt, D, 1, j, 0) * Rational(d));
    else
      m.images.push_back(t_elem(m.tgt, D, i, j, a % Np));
  }
  return m;
}

Morphism delta_NN(int n, int N, int Np, int D) {
  check_divisor(N, Np);
  Morphism m{build_t(n, N), build_t(n, Np), {}, D};
  const int d = N / Np;
  for (const auto& name : m.src.gens->letters()) {
    int i, j, a;
    decode(name, i, j, a);
    if (i == 1)
      m.images.push_back(t_elem(m.tgt, D, 1, j, 0));
    else if (a % d == 0)
      m.images.push_back(t_elem(m.tgt, D, i, j, a / d));
    else
      m.images.push_back(Series(m.tgt.gens, D));
  }
  return m;
}

std::vector<Series> pi_images_F(int N, int Np, int D) {
  check_divisor(N, Np);
  auto tgt = alphabet_fn1(Np);
  std::vector<Series> im{Series::letter(tgt, D, letter_A(), Rational(N / Np))};
  for (int a = 0; a < N; ++a) im.push_back(Series::letter(tgt, D, letter_B(a % Np, Np)));
  return im;
}

std::vector<Series> delta_images_F(int N, int Np, int D) {
  check_divisor(N, Np);
  const int d = N / Np;
  auto tgt = alphabet_fn1(Np);
  std::vector<Series> im{Series::letter(tgt, D, letter_A())};
  for (int a = 0; a < N; ++a)
    im.push_back(a % d == 0 ? Series::letter(tgt, D, letter_B(a / d, Np)) : Series(tgt, D));
  return im;
}

}  // namespace penta
