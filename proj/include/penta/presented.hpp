#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "penta/echelon.hpp"
#include "penta/ncseries.hpp"

namespace penta {

// Quadratic presentation over a degree-1 alphabet.
struct Presentation {
  std::string tag;  // t_{n,N} | t0_{n,N} | free | custom
  int n = 0;
  int N = 1;
  AlphabetPtr gens;
  std::vector<Series> relations;  // homogeneous of degree 2, truncation 2

  std::string hash() const;  // hex digest over letters and relations
  bool reduced() const { return tag == "t0_{n,N}"; }
};

// Generators: t1j (2<=j<=n), then tij@a for 2<=i<j<=n, a in Z/N (N=1: tij).
// t0 drops t1n. t_n is the N=1 case.
Presentation build_t(int n, int N);
Presentation build_t0(int n, int N);
Presentation free_presentation(AlphabetPtr a);

std::string t_letter_name(int i, int j, int a, int N);

// Element t(a)^{ij} (or t^{1j} when i=1) inside the algebra of P, as a degree-1 series.
// Handles t(a)^{ji} = t(-a)^{ij}; in t0 the generator t^{1n} is expanded through the
// central element.
Series t_elem(const Presentation& P, int D, int i, int j, int a = 0);
// Sum over c in Z/N of t(c)^{ij}.
Series t_sum(const Presentation& P, int D, int i, int j);
// z = sum_j t^{1j} + sum_{i<j} sum_c t(c)^{ij} in t_{n,N}.
Series central_z(const Presentation& P, int D);

// Per-degree quotient data. Normal words are closed under prefixes, so the degree-d
// ideal is I_{d-1}V plus the span of u.r (u normal of degree d-2, r a relation);
// we store only the reduction of the latter inside N_{d-1} (x) V.
class QuotientAlgebra {
 public:
  QuotientAlgebra(Presentation p, int D, bool parallel = true);

  const Presentation& presentation() const { return P_; }
  const AlphabetPtr& alphabet() const { return P_.gens; }
  int maxdeg() const { return D_; }
  int nletters() const { return n_; }

  // New ideal rows at degree d (modulo I_{d-1}V), fully reduced; columns are word ranks.
  const Echelon& ideal_component(int d) const { return E_.at(d); }
  const std::vector<std::uint64_t>& normal_words(int d) const { return normal_.at(d); }
  std::size_t normal_count(int d) const { return normal_.at(d).size(); }
  std::uint64_t free_dim(int d) const;
  std::uint64_t ideal_dim(int d) const { return free_dim(d) - normal_count(d); }

  template <class K>
  BasicSeries<K> normal_form(const BasicSeries<K>& x) const;
  bool in_ideal(const Series& x) const { return normal_form(x).is_zero(); }

  std::uint64_t rank_of(const Word& w) const;
  Word word_of(std::uint64_t r, int d) const;

  bool loaded_from_cache(int d) const { return from_cache_.at(d); }

 private:
  template <class K>
  std::map<std::uint64_t, K> nf_rec(int d, std::map<std::uint64_t, K> v) const;
  void build_degree(int d, bool parallel);

  Presentation P_;
  int D_;
  int n_;
  std::vector<Echelon> E_;
  std::vector<std::vector<std::uint64_t>> normal_;
  std::vector<bool> from_cache_;
};

// Shared, process-wide quotient instances (and the PENTA_CACHE disk cache underneath).
std::shared_ptr<const QuotientAlgebra> quotient(const Presentation& p, int D);

struct Morphism {
  Presentation src, tgt;
  std::vector<Series> images;  // one per source generator, degree 1, truncation D
  int D = 2;

  template <class K>
  BasicSeries<K> apply(const BasicSeries<K>& x) const;
};

bool check_morphism(const Morphism& m);

enum class XfVariant { TtoT, TNtoTN, TtoTN };

// f given in block notation "1,23,4": block k lists f^{-1}(k). Source t_{m,N} with m the
// number of blocks, target t_{n,N} (or t0 when reduced_target).
Morphism build_xf(const std::string& blocks, XfVariant v, int n_target, int N, int D,
                  bool reduced_target = true);
// Images of the free generators: F_2 = t0_3 (A=t12, B=t23) for TtoT/TtoTN; F_{N+1} =
// t0_{3,N} (A=t12, B(a)=t23(a)) for TNtoTN.
std::vector<Series> xf_free_images(const std::string& blocks, XfVariant v, int n_target, int N,
                                   int D);

Morphism pi_NN(int n, int N, int Np, int D);
Morphism delta_NN(int n, int N, int Np, int D);
// The same maps on F_{N+1} -> F_{N'+1} (A = t12, B(a) = t23(a)).
std::vector<Series> pi_images_F(int N, int Np, int D);
std::vector<Series> delta_images_F(int N, int Np, int D);

// --- implementation of templates ---

template <class K>
std::map<std::uint64_t, K> QuotientAlgebra::nf_rec(int d, std::map<std::uint64_t, K> v) const {
  if (d <= 1 || v.empty()) return v;
  const std::uint64_t n = static_cast<std::uint64_t>(n_);
  std::vector<std::map<std::uint64_t, K>> buckets(n_);
  for (auto& [r, c] : v) buckets[r % n].emplace(r / n, std::move(c));
  std::map<std::uint64_t, K> out;
  for (int x = 0; x < n_; ++x) {
    if (buckets[x].empty()) continue;
    for (auto& [m, c] : nf_rec(d - 1, std::move(buckets[x]))) {
      auto [it, fresh] = out.emplace(m * n + x, c);
      if (!fresh) it->second += c;
    }
  }
  const Echelon& e = E_[d];
  std::vector<std::pair<std::uint64_t, K>> hits;
  for (auto& [col, c] : out)
    if (!Coeff<K>::is_zero(c) && e.is_pivot(col)) hits.emplace_back(col, c);
  for (auto& [col, c] : hits) {
    const SparseRow& row = e.rows[e.pivot.at(col)];
    for (std::size_t k = 0; k < row.cols.size(); ++k) {
      K t = Coeff<K>::from(row.vals[k]);
      t *= c;
      out[row.cols[k]] -= t;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = Coeff<K>::is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

template <class K>
BasicSeries<K> QuotientAlgebra::normal_form(const BasicSeries<K>& x) const {
  if (!x.alphabet().same_as(*P_.gens)) throw AlphabetMismatch("normal_form: alphabet mismatch");
  if (x.maxdeg() > D_)
    throw TruncationMismatch("normal_form: degree " + std::to_string(x.maxdeg()) +
                             " exceeds quotient truncation " + std::to_string(D_));
  std::vector<std::map<std::uint64_t, K>> byd(x.maxdeg() + 1);
  for (const auto& [w, c] : x.terms()) byd[w.size()].emplace(rank_of(w), c);
  BasicSeries<K> r(x.alphabet_ptr(), x.maxdeg());
  auto& m = r.mutable_terms();
  for (int d = 0; d <= x.maxdeg(); ++d)
    for (auto& [rk, c] : nf_rec(d, std::move(byd[d]))) m.emplace(word_of(rk, d), c);
  return r;
}

template <class K>
BasicSeries<K> Morphism::apply(const BasicSeries<K>& x) const {
  std::vector<BasicSeries<K>> ims;
  for (const auto& s : images) ims.push_back(convert<K>(s.with_maxdeg(std::max(D, x.maxdeg()))));
  return substitute(x, ims);
}

}  // namespace penta
