#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "penta/kernels.hpp"
#include "penta/series.hpp"

namespace penta {

template <class K>
BasicSeries<K> concat_mul(const BasicSeries<K>& a, const BasicSeries<K>& b) {
  return kernels::concat_mul_omp(a, b);
}
template <class K>
BasicSeries<K> operator*(const BasicSeries<K>& a, const BasicSeries<K>& b) {
  return concat_mul(a, b);
}

// All interleavings of u and v, with multiplicity.
inline void shuffle_words(const Word& u, const Word& v,
                          const std::function<void(const Word&)>& emit) {
  const std::size_t n = u.size() + v.size();
  Word w(n);
  // choose which slots take letters of u (indices increasing)
  std::vector<std::size_t> pos(u.size());
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t start) {
    if (i == u.size()) {
      std::size_t iu = 0, iv = 0, k = 0;
      for (std::size_t s = 0; s < n; ++s) {
        if (k < pos.size() && pos[k] == s) {
          w[s] = u[iu++];
          ++k;
        } else {
          w[s] = v[iv++];
        }
      }
      emit(w);
      return;
    }
    for (std::size_t s = start; s + (u.size() - i) <= n; ++s) {
      pos[i] = s;
      rec(i + 1, s + 1);
    }
  };
  rec(0, 0);
}

template <class K>
BasicSeries<K> shuffle_mul(const BasicSeries<K>& a, const BasicSeries<K>& b) {
  a.check_compatible(b);
  const Alphabet& al = a.alphabet();
  BasicSeries<K> r(a.alphabet_ptr(), a.maxdeg());
  for (const auto& [u, cu] : a.terms()) {
    int du = al.word_degree(u);
    for (const auto& [v, cv] : b.terms()) {
      if (du + al.word_degree(v) > a.maxdeg()) continue;
      K c = cu;
      c *= cv;
      shuffle_words(u, v, [&](const Word& w) { r.add(w, c); });
    }
  }
  return r;
}

// Standard coproduct: letters primitive, extended multiplicatively (deshuffle).
template <class K>
BasicTensor<K> coproduct(const BasicSeries<K>& a) {
  BasicTensor<K> t{a.alphabet_ptr(), a.maxdeg(), {}};
  for (const auto& [w, c] : a.terms()) {
    const std::size_t m = w.size();
    if (m > 20) throw std::length_error("coproduct: word too long");
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      Word l, r;
      for (std::size_t i = 0; i < m; ++i) ((mask >> i) & 1u ? l : r).push_back(w[i]);
      t.add(l, r, c);
    }
  }
  return t;
}

template <class K>
BasicTensor<K> tensor_product(const BasicSeries<K>& a, const BasicSeries<K>& b) {
  a.check_compatible(b);
  BasicTensor<K> t{a.alphabet_ptr(), a.maxdeg(), {}};
  for (const auto& [u, cu] : a.terms())
    for (const auto& [v, cv] : b.terms()) {
      K c = cu;
      c *= cv;
      t.add(u, v, c);
    }
  return t;
}

template <class K>
BasicSeries<K> exp_series(const BasicSeries<K>& x) {
  if (!Coeff<K>::is_zero(x.constant_term()))
    throw std::invalid_argument("exp_series: constant term must be 0");
  BasicSeries<K> result = BasicSeries<K>::one(x.alphabet_ptr(), x.maxdeg());
  BasicSeries<K> term = result;
  const int lo = std::max(1, x.min_degree());
  for (int n = 1; n * lo <= x.maxdeg(); ++n) {
    term = concat_mul(term, x);
    term *= Coeff<K>::from(Rational(1, n));
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

template <class K>
BasicSeries<K> log_series(const BasicSeries<K>& g) {
  if (Coeff<K>::magnitude(g.constant_term() - Coeff<K>::one()) != 0.0)
    throw std::invalid_argument("log_series: constant term must be 1");
  BasicSeries<K> y = g;
  y.set(Word{}, Coeff<K>::zero());
  BasicSeries<K> result(g.alphabet_ptr(), g.maxdeg());
  BasicSeries<K> power = BasicSeries<K>::one(g.alphabet_ptr(), g.maxdeg());
  const int lo = std::max(1, y.min_degree());
  for (int n = 1; n * lo <= g.maxdeg(); ++n) {
    power = concat_mul(power, y);
    if (power.is_zero()) break;
    Rational c(n % 2 ? 1 : -1, n);
    result += power * Coeff<K>::from(c);
  }
  return result;
}

// Inverse of a series with constant term 1.
template <class K>
BasicSeries<K> inverse_series(const BasicSeries<K>& g) {
  if (Coeff<K>::magnitude(g.constant_term() - Coeff<K>::one()) != 0.0)
    throw std::invalid_argument("inverse_series: constant term must be 1");
  BasicSeries<K> y = g;
  y.set(Word{}, Coeff<K>::zero());
  y = -y;
  BasicSeries<K> result = BasicSeries<K>::one(g.alphabet_ptr(), g.maxdeg());
  BasicSeries<K> power = result;
  const int lo = std::max(1, y.min_degree());
  for (int n = 1; n * lo <= g.maxdeg(); ++n) {
    power = concat_mul(power, y);
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

// Ad(u)(x) = u x u^{-1}
template <class K>
BasicSeries<K> adjoint(const BasicSeries<K>& u, const BasicSeries<K>& x) {
  return concat_mul(concat_mul(u, x), inverse_series(u));
}

template <class K>
bool is_primitive(const BasicSeries<K>& x, double tol = 0.0) {
  if (Coeff<K>::magnitude(x.constant_term()) > tol) return false;
  BasicTensor<K> d = coproduct(x);
  for (const auto& [w, c] : x.terms()) {
    d.add(w, Word{}, -c);
    d.add(Word{}, w, -c);
  }
  return d.max_abs() <= tol;
}

template <class K>
bool is_grouplike(const BasicSeries<K>& g, double tol = 0.0) {
  if (Coeff<K>::magnitude(g.constant_term() - Coeff<K>::one()) > tol) return false;
  BasicSeries<K> gg = g;
  gg.set(Word{}, Coeff<K>::one());
  return is_primitive(log_series(gg), tol);
}

struct SubstitutionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Algebra morphism determined by letter images; images[i] is the image of letter i.
// All images must share one target alphabet and truncation; each image is homogeneous
// of the source letter's degree (or zero).
template <class K>
BasicSeries<K> substitute(const BasicSeries<K>& a, const std::vector<BasicSeries<K>>& images) {
  const Alphabet& src = a.alphabet();
  if (static_cast<int>(images.size()) != src.size())
    throw SubstitutionError("substitute: missing image (expected " + std::to_string(src.size()) +
                            ", got " + std::to_string(images.size()) + ")");
  AlphabetPtr tgt;
  int D = -1;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& im = images[i];
    if (!im.alphabet_ptr()) throw SubstitutionError("substitute: missing image for " + src.letter(i));
    if (!tgt) {
      tgt = im.alphabet_ptr();
      D = im.maxdeg();
    } else if (!tgt->same_as(im.alphabet()) || D != im.maxdeg()) {
      throw SubstitutionError("substitute: images over different targets");
    }
    for (const auto& [w, c] : im.terms())
      if (im.alphabet().word_degree(w) != src.degree(static_cast<Letter>(i)))
        throw SubstitutionError("substitute: image of " + src.letter(i) + " not homogeneous of degree " +
                                std::to_string(src.degree(static_cast<Letter>(i))));
  }
  if (D < a.maxdeg())
    throw TruncationMismatch("substitute: target truncation below source truncation");
  // result lives at the source truncation; higher target degrees would be incomplete
  D = a.maxdeg();
  std::vector<BasicSeries<K>> ims;
  ims.reserve(images.size());
  for (const auto& im : images) ims.push_back(im.with_maxdeg(D));
  BasicSeries<K> result(tgt, D);
  // expand word by word, sharing prefixes through the ordered traversal
  std::vector<std::pair<Word, BasicSeries<K>>> stack;
  for (const auto& [w, c] : a.terms()) {
    std::size_t keep = 0;
    while (keep < stack.size() && keep < w.size() && stack[keep].first.size() == keep + 1 &&
           stack[keep].first.back() == w[keep] &&
           std::equal(stack[keep].first.begin(), stack[keep].first.end(), w.begin()))
      ++keep;
    stack.resize(keep);
    for (std::size_t i = keep; i < w.size(); ++i) {
      BasicSeries<K> prev = i == 0 ? BasicSeries<K>::one(tgt, D) : stack[i - 1].second;
      Word pre(w.begin(), w.begin() + i + 1);
      stack.emplace_back(pre, concat_mul(prev, ims[w[i]]));
    }
    if (w.empty()) {
      result.add(Word{}, c);
    } else {
      for (const auto& [u, cu] : stack.back().second.terms()) {
        K x = cu;
        x *= c;
        result.add(u, x);
      }
    }
  }
  return result;
}

}  // namespace penta
