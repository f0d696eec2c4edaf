#include "penta/equations.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <random>

namespace penta {

std::string eq_name(Eq e) {
  switch (e) {
    case Eq::Pentagon: return "pentagon";
    case Eq::Hexagons: return "hexagons";
    case Eq::MixedPentagon: return "mixed_pentagon";
    case Eq::Octagon: return "octagon";
    case Eq::SpecialAction: return "special_action";
    case Eq::Distribution: return "distribution";
  }
  return "?";
}

Eq parse_eq(const std::string& s0) {
  std::string s = s0;
  std::replace(s.begin(), s.end(), '-', '_');
  for (Eq e : {Eq::Pentagon, Eq::Hexagons, Eq::MixedPentagon, Eq::Octagon, Eq::SpecialAction,
               Eq::Distribution})
    if (eq_name(e) == s) return e;
  if (s == "hexagon") return Eq::Hexagons;
  throw std::invalid_argument("unknown equation '" + s0 + "'");
}

const PentagonMaps& pentagon_maps(int N, int D) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<PentagonMaps>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = memo[{N, D}];
  if (!slot) {
    auto m = std::make_unique<PentagonMaps>();
    m->q = quotient(build_t0(4, N), D);
    if (N == 1) {
      m->g_1_2_34 = xf_free_images("1,2,34", XfVariant::TtoT, 4, 1, D);
      m->g_12_3_4 = xf_free_images("12,3,4", XfVariant::TtoT, 4, 1, D);
      m->g_2_3_4 = xf_free_images("2,3,4", XfVariant::TtoT, 4, 1, D);
      m->g_1_23_4 = xf_free_images("1,23,4", XfVariant::TtoT, 4, 1, D);
      m->g_1_2_3 = xf_free_images("1,2,3", XfVariant::TtoT, 4, 1, D);
    }
    m->h_1_2_34 = xf_free_images("1,2,34", XfVariant::TNtoTN, 4, N, D);
    m->h_12_3_4 = xf_free_images("12,3,4", XfVariant::TNtoTN, 4, N, D);
    m->h_1_23_4 = xf_free_images("1,23,4", XfVariant::TNtoTN, 4, N, D);
    m->h_1_2_3 = xf_free_images("1,2,3", XfVariant::TNtoTN, 4, N, D);
    m->g_2_3_4_mixed = xf_free_images("2,3,4", XfVariant::TtoTN, 4, N, D);
    slot = std::move(m);
  }
  return *slot;
}

std::vector<Series> shift_images(int N, int D, int shift, int sign, bool use_c) {
  auto F = alphabet_fn1(N);
  std::vector<Series> im;
  im.push_back(use_c ? eqdetail::letter_C<Rational>(F, D) : Series::letter(F, D, 0));
  for (int c = 0; c < N; ++c) im.push_back(Series::letter(F, D, letter_B(shift + sign * c, N)));
  return im;
}

// --- solver ---

InconsistentSystem::InconsistentSystem(int d, int r, int ar, int u)
    : std::runtime_error("inconsistent system at degree " + std::to_string(d) + ": rank " +
                         std::to_string(r) + ", augmented rank " + std::to_string(ar) + ", " +
                         std::to_string(u) + " unknowns"),
      degree(d),
      rank(r),
      augmented_rank(ar),
      unknowns(u) {}

bool SolverConfig::solves_g() const {
  return imposed.count(Eq::Pentagon) || imposed.count(Eq::Hexagons) ||
         imposed.count(Eq::MixedPentagon);
}
bool SolverConfig::solves_h() const {
  return imposed.count(Eq::MixedPentagon) || imposed.count(Eq::Octagon) ||
         imposed.count(Eq::SpecialAction) || imposed.count(Eq::Distribution);
}

void SolverConfig::validate() const {
  if (N < 1) throw std::invalid_argument("solver: N must be >= 1");
  if (D < 1) throw std::invalid_argument("solver: D must be >= 1");
  if (imposed.empty()) throw std::invalid_argument("solver: no equations imposed");
  if (imposed.count(Eq::MixedPentagon) && !imposed.count(Eq::Pentagon))
    throw std::invalid_argument("solver: mixed_pentagon requires pentagon on g");
}

namespace {

struct State {
  Series psi_g, psi_h;  // Lie series (log g, log h) at truncation D
};

int shift_of(Eq e) { return e == Eq::SpecialAction ? 1 : 0; }

// Residual parts of one equation at truncation E.
std::vector<Series> eval_parts(const SolverConfig& cfg, Eq e, const Series& psi_g,
                               const Series& psi_h, int E) {
  Series g = exp_series(psi_g.with_maxdeg(E));
  Series h = exp_series(psi_h.with_maxdeg(E));
  switch (e) {
    case Eq::Pentagon: return residual_pentagon(g, E).parts;
    case Eq::Hexagons: return residual_hexagons(g, cfg.mu, E).parts;
    case Eq::MixedPentagon: return residual_mixed_pentagon(g, h, cfg.N, E).parts;
    case Eq::Octagon: return residual_octagon(h, cfg.mu, cfg.a, cfg.N, E).parts;
    case Eq::SpecialAction: return residual_special_action(h, cfg.N, E).parts;
    case Eq::Distribution: {
      std::vector<Series> out;
      for (int Np = 1; Np < cfg.N; ++Np)
        if (cfg.N % Np == 0)
          for (auto& p : residual_distribution(h, cfg.N, Np, E).parts) out.push_back(std::move(p));
      return out;
    }
  }
  return {};
}

using RowKey = std::tuple<int, int, Word>;  // equation slot, part, word
struct RowKeyLess {
  bool operator()(const RowKey& x, const RowKey& y) const {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
    if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
    return WordLess{}(std::get<2>(x), std::get<2>(y));
  }
};

void scatter(std::map<RowKey, std::vector<Rational>, RowKeyLess>& rows, std::size_t width, int slot,
             const std::vector<Series>& parts, int degree, std::size_t col, const Rational& sign) {
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (const auto& [w, c] : parts[p].terms()) {
      if (parts[p].alphabet().word_degree(w) != degree) continue;
      auto& r = rows[{slot, static_cast<int>(p), w}];
      if (r.empty()) r.assign(width, Rational(0));
      r[col] += sign * c;
    }
}

// Incremental RREF on dense rows [x_0..x_{n-1} | rhs].
struct Rref {
  std::size_t n;
  std::vector<std::vector<Rational>> rows;
  std::vector<std::size_t> pivots;
  bool inconsistent = false;

  void insert(std::vector<Rational> r) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Rational f = r[pivots[k]];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= n; ++j)
        if (rows[k][j] != 0) r[j] -= f * rows[k][j];
    }
    std::size_t p = 0;
    while (p < n && r[p] == 0) ++p;
    if (p == n) {
      if (r[n] != 0) inconsistent = true;
      return;
    }
    const Rational inv = 1 / r[p];
    for (auto& v : r) v *= inv;
    for (auto& row : rows) {
      const Rational f = row[p];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= n; ++j)
        if (r[j] != 0) row[j] -= f * r[j];
    }
    rows.push_back(std::move(r));
    pivots.push_back(p);
  }
};

}  // namespace

AssociatorPair solve_degreewise(const SolverConfig& cfg0, const SolverProgress& progress,
                                std::vector<DegreeStats>* stats) {
  cfg0.validate();
  SolverConfig cfg = cfg0;
  cfg.a = mod(cfg.a, cfg.N);
  if (cfg.mu != 0 && cfg.imposed.count(Eq::Pentagon)) cfg.imposed.insert(Eq::Hexagons);
  const int D = cfg.D;
  const bool sg = cfg.solves_g(), sh = cfg.solves_h();

  LyndonBasis LG(alphabet_f2(), D), LH(alphabet_fn1(cfg.N), D);
  if (cfg.imposed.count(Eq::Pentagon) || cfg.imposed.count(Eq::MixedPentagon))
    pentagon_maps(cfg.N, D);  // build once, before any parallel probing
  if (cfg.imposed.count(Eq::Pentagon)) pentagon_maps(1, D);

  State st{Series(alphabet_f2(), D), Series(alphabet_fn1(cfg.N), D)};
  const std::vector<Eq> eqs(cfg.imposed.begin(), cfg.imposed.end());
  std::mt19937_64 rng(cfg.seed);

  for (int d = 1; d <= D; ++d) {
    auto t0 = std::chrono::steady_clock::now();
    struct Unknown {
      bool is_g;
      Word w;
      const Series* P;
    };
    std::vector<Unknown> unk;
    if (sg)
      for (const auto& w : LG.words(d)) unk.push_back({true, w, &LG.bracket(w)});
    if (sh)
      for (const auto& w : LH.words(d)) unk.push_back({false, w, &LH.bracket(w)});
    const std::size_t nu = unk.size();

    std::map<RowKey, std::vector<Rational>, RowKeyLess> rows;
    // Degree-1 h enters degree 2 quadratically; from N=3 on, the mixed pentagon alone
    // admits degree-1 values that do not extend. Unless the caller pinned degree 1, seed
    // it with the octagon's degree-1 part.
    std::vector<Eq> active = eqs;
    if (d == 1 && cfg.N >= 3 && cfg.imposed.count(Eq::MixedPentagon) &&
        !cfg.imposed.count(Eq::Octagon) &&
        std::none_of(cfg.pinned_h.begin(), cfg.pinned_h.end(),
                     [](const auto& kv) { return kv.first.size() == 1; }))
      active.push_back(Eq::Octagon);
    int slot = 0;
    for (Eq e : active) {
      const int E = d + shift_of(e);
      if (E > D) {
        ++slot;
        continue;
      }
      const bool use_base = shift_of(e) > 0;
      // constant term, moved to the right-hand side
      scatter(rows, nu + 1, slot, eval_parts(cfg, e, st.psi_g, st.psi_h, E), E, nu, Rational(-1));
      Series zg(alphabet_f2(), D), zh(alphabet_fn1(cfg.N), D);
      const Series& bg = use_base ? st.psi_g : zg;
      const Series& bh = use_base ? st.psi_h : zh;
      const std::vector<Series> probe0 = eval_parts(cfg, e, bg, bh, E);
      std::vector<std::vector<Series>> probes(nu);
      std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
      for (std::size_t i = 0; i < nu; ++i) {
        try {
          Series pg = bg, ph = bh;
          Series P = unk[i].P->with_maxdeg(D);
          (unk[i].is_g ? pg : ph) += P;
          probes[i] = eval_parts(cfg, e, pg, ph, E);
        } catch (...) {
#pragma omp critical
          err = std::current_exception();
        }
      }
      if (err) std::rethrow_exception(err);
      for (std::size_t i = 0; i < nu; ++i) {
        scatter(rows, nu + 1, slot, probes[i], E, i, Rational(1));
        scatter(rows, nu + 1, slot, probe0, E, i, Rational(-1));
      }
      ++slot;
    }
    if (sh)
      for (std::size_t i = 0; i < nu; ++i) {
        if (unk[i].is_g) continue;
        const Word& w = unk[i].w;
        auto it = cfg.pinned_h.find(w);
        if (it == cfg.pinned_h.end()) continue;
        std::vector<Rational> r(nu + 1, Rational(0));
        r[i] = 1;
        r[nu] = it->second;
        rows[{-2, 0, w}] = std::move(r);
      }
    if (d == 1 && sh) {
      // c_A(h) = c_{B(0)}(h) = 0
      for (std::size_t i = 0; i < nu; ++i) {
        if (unk[i].is_g) continue;
        const Word& w = unk[i].w;
        if (w == Word{0} || w == Word{letter_B(0, cfg.N)}) {
          std::vector<Rational> r(nu + 1, Rational(0));
          r[i] = 1;
          rows[{-1, 0, w}] = std::move(r);
        }
      }
    }

    Rref rr{nu, {}, {}};
    for (auto& [k, r] : rows) {
      rr.insert(std::move(r));
    }
    if (rr.inconsistent)
      throw InconsistentSystem(d, static_cast<int>(rr.rows.size()),
                               static_cast<int>(rr.rows.size()) + 1, static_cast<int>(nu));

    std::vector<Rational> x(nu, Rational(0));
    std::vector<bool> is_pivot(nu, false);
    for (auto p : rr.pivots) is_pivot[p] = true;
    if (cfg.policy == FreeParams::Seeded) {
      std::uniform_int_distribution<int> num(-3, 3), den(1, 4);
      for (std::size_t i = 0; i < nu; ++i)
        if (!is_pivot[i]) x[i] = Q(num(rng), den(rng));
    }
    for (std::size_t k = 0; k < rr.rows.size(); ++k) {
      Rational v = rr.rows[k][nu];
      for (std::size_t j = 0; j < nu; ++j)
        if (!is_pivot[j] && rr.rows[k][j] != 0) v -= rr.rows[k][j] * x[j];
      x[rr.pivots[k]] = v;
    }
    for (std::size_t i = 0; i < nu; ++i) {
      if (x[i] == 0) continue;
      Series P = unk[i].P->with_maxdeg(D);
      P *= x[i];
      (unk[i].is_g ? st.psi_g : st.psi_h) += P;
    }

    // the new degree must now vanish exactly
    for (Eq e : eqs) {
      const int E = d + shift_of(e);
      if (E > D) continue;
      for (const auto& p : eval_parts(cfg, e, st.psi_g, st.psi_h, E))
        if (!p.degree_part(E).is_zero())
          throw std::logic_error("solver: residual of " + eq_name(e) + " nonzero at degree " +
                                 std::to_string(E) + " after solve");
    }

    DegreeStats ds{d,
                   static_cast<int>(nu),
                   static_cast<int>(rows.size()),
                   static_cast<int>(rr.rows.size()),
                   static_cast<int>(nu - rr.rows.size()),
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    if (stats) stats->push_back(ds);
    if (progress) progress(ds);
  }

  AssociatorPair out;
  out.g = exp_series(st.psi_g);
  out.h = exp_series(st.psi_h);
  out.N = cfg.N;
  out.a = cfg.a;
  out.mu = cfg.mu;
  out.D = D;
  out.imposed = cfg.imposed;
  return out;
}

}  // namespace penta
