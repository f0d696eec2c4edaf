#pragma once

// Hot kernels in two flavours: a plain serial reference and an OpenMP version.
// Tests compare them term by term; the benchmark target times them.

#include <omp.h>

#include <unordered_map>
#include <vector>

#include "penta/series.hpp"

namespace penta::kernels {

template <class K>
using TermRef = std::pair<const Word*, const K*>;

template <class K>
std::vector<std::vector<TermRef<K>>> by_degree(const BasicSeries<K>& s) {
  std::vector<std::vector<TermRef<K>>> out(s.maxdeg() + 1);
  for (const auto& [w, c] : s.terms()) out[s.alphabet().word_degree(w)].push_back({&w, &c});
  return out;
}

template <class K>
BasicSeries<K> concat_mul_serial(const BasicSeries<K>& a, const BasicSeries<K>& b) {
  a.check_compatible(b);
  const Alphabet& al = a.alphabet();
  const int D = a.maxdeg();
  BasicSeries<K> r(a.alphabet_ptr(), D);
  for (const auto& [u, cu] : a.terms()) {
    int du = al.word_degree(u);
    for (const auto& [v, cv] : b.terms()) {
      if (du + al.word_degree(v) > D) continue;
      Word w;
      w.reserve(u.size() + v.size());
      w.insert(w.end(), u.begin(), u.end());
      w.insert(w.end(), v.begin(), v.end());
      K c = cu;
      c *= cv;
      r.add(w, c);
    }
  }
  return r;
}

// Output degree blocks are disjoint, so each block is accumulated privately.
template <class K>
BasicSeries<K> concat_mul_omp(const BasicSeries<K>& a, const BasicSeries<K>& b) {
  a.check_compatible(b);
  const int D = a.maxdeg();
  auto A = by_degree(a);
  auto B = by_degree(b);
  std::vector<std::vector<std::pair<Word, K>>> blocks(D + 1);
#pragma omp parallel for schedule(dynamic, 1)
  for (int d = D; d >= 0; --d) {
    std::unordered_map<Word, K, WordHash> acc;
    for (int i = 0; i <= d; ++i) {
      for (const auto& [u, cu] : A[i]) {
        for (const auto& [v, cv] : B[d - i]) {
          Word w;
          w.reserve(u->size() + v->size());
          w.insert(w.end(), u->begin(), u->end());
          w.insert(w.end(), v->begin(), v->end());
          K c = *cu;
          c *= *cv;
          auto it = acc.find(w);
          if (it == acc.end())
            acc.emplace(std::move(w), std::move(c));
          else
            it->second += c;
        }
      }
    }
    auto& blk = blocks[d];
    blk.reserve(acc.size());
    for (auto& [w, c] : acc)
      if (!Coeff<K>::is_zero(c)) blk.emplace_back(w, std::move(c));
  }
  BasicSeries<K> r(a.alphabet_ptr(), D);
  auto& m = r.mutable_terms();
  for (auto& blk : blocks)
    for (auto& [w, c] : blk) m.emplace(std::move(w), std::move(c));
  return r;
}

}  // namespace penta::kernels
