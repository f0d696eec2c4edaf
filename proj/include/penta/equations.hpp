#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "penta/lie.hpp"
#include "penta/presented.hpp"

namespace penta {

enum class Eq { Pentagon, Hexagons, MixedPentagon, Octagon, SpecialAction, Distribution };

std::string eq_name(Eq e);
Eq parse_eq(const std::string& s);  // accepts '-' or '_' separators

template <class K>
struct Residual {
  Eq tag;
  std::vector<BasicSeries<K>> parts;  // hexagons and distribution have several

  bool is_zero() const {
    for (const auto& p : parts)
      if (!p.is_zero()) return false;
    return true;
  }
  double max_abs() const {
    double m = 0;
    for (const auto& p : parts) m = std::max(m, p.max_abs());
    return m;
  }
  std::vector<double> max_by_degree() const {
    std::vector<double> v;
    for (const auto& p : parts) {
      auto q = p.max_abs_by_degree();
      if (q.size() > v.size()) v.resize(q.size(), 0.0);
      for (std::size_t i = 0; i < q.size(); ++i) v[i] = std::max(v[i], q[i]);
    }
    return v;
  }
};

// Substitution data for the pentagon-type equations in t0_{4,N}, memoized per (N, D).
struct PentagonMaps {
  std::shared_ptr<const QuotientAlgebra> q;  // U t0_{4,N}
  // F_2 images for the pentagon (filled only for N=1)
  std::vector<Series> g_1_2_34, g_12_3_4, g_2_3_4, g_1_23_4, g_1_2_3;
  // F_{N+1} images (tN->tN variant)
  std::vector<Series> h_1_2_34, h_12_3_4, h_1_23_4, h_1_2_3;
  std::vector<Series> g_2_3_4_mixed;  // t->tN variant
};
const PentagonMaps& pentagon_maps(int N, int D);

// Images on F_{N+1}: A -> A (or C when use_c), B(c) -> B(shift + sign*c).
std::vector<Series> shift_images(int N, int D, int shift, int sign, bool use_c);

template <class K>
Residual<K> residual_pentagon(const BasicSeries<K>& g, int D);
template <class K>
Residual<K> residual_hexagons(const BasicSeries<K>& g, const K& mu, int D);
template <class K>
Residual<K> residual_mixed_pentagon(const BasicSeries<K>& g, const BasicSeries<K>& h, int N, int D);
template <class K>
Residual<K> residual_octagon(const BasicSeries<K>& h, const K& mu, int a, int N, int D);
template <class K>
Residual<K> residual_special_action(const BasicSeries<K>& h, int N, int D);
template <class K>
Residual<K> residual_distribution(const BasicSeries<K>& h, int N, int Np, int D);

enum class FreeParams { Zero, Seeded };

struct SolverConfig {
  int N = 1;
  Rational mu = 1;
  int a = 1;
  int D = 2;
  std::set<Eq> imposed{Eq::Pentagon, Eq::Hexagons};
  FreeParams policy = FreeParams::Zero;
  std::uint64_t seed = 0;
  // Lyndon coordinates of log h fixed in advance (extra linear equations).
  std::map<Word, Rational, WordLess> pinned_h;

  void validate() const;  // throws std::invalid_argument
  bool solves_g() const;
  bool solves_h() const;
};

struct AssociatorPair {
  Series g;  // on F_2
  Series h;  // on F_{N+1}
  int N = 1;
  int a = 1;
  Rational mu = 0;
  int D = 0;
  std::set<Eq> imposed;
  std::string provenance = "solver";
};

struct DegreeStats {
  int degree;
  int unknowns;
  int equations;
  int rank;
  int free;
  double seconds;
};

struct InconsistentSystem : std::runtime_error {
  int degree, rank, augmented_rank, unknowns;
  InconsistentSystem(int d, int r, int ar, int u);
};

using SolverProgress = std::function<void(const DegreeStats&)>;

AssociatorPair solve_degreewise(const SolverConfig& cfg, const SolverProgress& progress = {},
                                std::vector<DegreeStats>* stats = nullptr);

}  // namespace penta

#include "penta/equations_impl.hpp"
