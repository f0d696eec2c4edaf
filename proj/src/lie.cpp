#include "penta/lie.hpp"

#include <algorithm>

namespace penta {

bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  // strictly smaller than every proper rotation
  const std::size_t n = w.size();
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      Letter a = w[k], b = w[(i + k) % n];
      if (a < b) break;
      if (a > b) return false;
      if (k + 1 == n) return false;  // periodic
    }
  }
  return true;
}

std::vector<Word> lyndon_words(const Alphabet& a, int degree) {
  std::vector<Word> out;
  if (degree < 1) return out;
  const int k = a.size();
  int minDeg = *std::min_element(a.degrees().begin(), a.degrees().end());
  const int n = degree / std::max(1, minDeg);
  // Duval's generation of all Lyndon words of length <= n
  Word w{0};
  while (!w.empty()) {
    if (a.word_degree(w) == degree) out.push_back(w);
    const std::size_t m = w.size();
    while (static_cast<int>(w.size()) < n) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == k - 1) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  std::sort(out.begin(), out.end(), WordLess{});
  return out;
}

long witt_dimension(int n, int k) {
  auto mobius = [](int d) {
    int r = 1;
    for (int p = 2; p * p <= d; ++p) {
      if (d % p == 0) {
        d /= p;
        if (d % p == 0) return 0;
        r = -r;
      }
    }
    if (d > 1) r = -r;
    return r;
  };
  long s = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    long p = 1;
    for (int i = 0; i < n / d; ++i) p *= k;
    s += mobius(d) * p;
  }
  return s / n;
}

LyndonBasis::LyndonBasis(AlphabetPtr a, int maxdeg) : alpha_(std::move(a)), D_(maxdeg) {
  if (!alpha_->uniform_degree_one())
    throw std::invalid_argument("LyndonBasis: letters must have degree 1");
  words_.resize(D_ + 1);
  for (int d = 1; d <= D_; ++d) words_[d] = lyndon_words(*alpha_, d);
}

const Series& LyndonBasis::bracket(const Word& w) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
  }
  Series p(alpha_, D_);
  if (w.size() == 1) {
    p.add(w, Rational(1));
  } else {
    // standard factorization: v = longest proper Lyndon suffix
    std::size_t split = 1;
    for (std::size_t i = 1; i < w.size(); ++i) {
      if (is_lyndon(Word(w.begin() + i, w.end()))) {
        split = i;
        break;
      }
    }
    Word u(w.begin(), w.begin() + split), v(w.begin() + split, w.end());
    const Series& pu = bracket(u);
    const Series& pv = bracket(v);
    p = concat_mul(pu, pv) - concat_mul(pv, pu);
  }
  std::lock_guard<std::mutex> lk(mu_);
  return memo_.emplace(w, std::move(p)).first->second;
}

Series LyndonBasis::to_series(const LieSeries& x) const {
  Series s(alpha_, D_);
  for (const auto& [w, c] : x.coords) {
    if (alpha_->word_degree(w) > D_) continue;
    s += bracket(w) * c;
  }
  return s;
}

LieSeries LyndonBasis::from_series(const Series& x) const {
  if (!x.alphabet().same_as(*alpha_) || x.maxdeg() != D_)
    throw AlphabetMismatch("LyndonBasis: series does not match basis");
  LieSeries out{alpha_, D_, {}};
  Series rest = x;
  if (!Coeff<Rational>::is_zero(rest.constant_term()))
    throw NotPrimitive("nonzero constant term");
  while (!rest.is_zero()) {
    // shortlex order => first term is the smallest word of the lowest degree
    auto it = rest.terms().begin();
    Word w = it->first;
    Rational c = it->second;
    if (!is_lyndon(w))
      throw NotPrimitive("not primitive: leading word " + alpha_->word_string(w) + " is not Lyndon");
    out.coords[w] = c;
    rest -= bracket(w) * c;
  }
  return out;
}

}  // namespace penta
