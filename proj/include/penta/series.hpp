#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "penta/alphabet.hpp"
#include "penta/rational.hpp"

namespace penta {

struct TruncationMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct AlphabetMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class K>
class BasicSeries {
 public:
  using Map = std::map<Word, K, WordLess>;

  BasicSeries() = default;
  BasicSeries(AlphabetPtr a, int maxdeg) : alpha_(std::move(a)), maxdeg_(maxdeg) {
    if (!alpha_) throw std::invalid_argument("series without alphabet");
    if (maxdeg_ < 0) throw std::invalid_argument("negative truncation degree");
  }

  static BasicSeries one(AlphabetPtr a, int D) {
    BasicSeries s(std::move(a), D);
    s.add(Word{}, Coeff<K>::one());
    return s;
  }
  static BasicSeries letter(AlphabetPtr a, int D, Letter l, const K& c = Coeff<K>::one()) {
    BasicSeries s(std::move(a), D);
    s.add(Word{l}, c);
    return s;
  }
  static BasicSeries word(AlphabetPtr a, int D, const Word& w, const K& c = Coeff<K>::one()) {
    BasicSeries s(std::move(a), D);
    s.add(w, c);
    return s;
  }

  const Alphabet& alphabet() const { return *alpha_; }
  const AlphabetPtr& alphabet_ptr() const { return alpha_; }
  int maxdeg() const { return maxdeg_; }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  K coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Coeff<K>::zero() : it->second;
  }
  K constant_term() const { return coeff(Word{}); }

  // Adds c·w; silently drops words beyond the truncation degree.
  void add(const Word& w, const K& c) {
    if (Coeff<K>::is_zero(c)) return;
    if (alpha_->word_degree(w) > maxdeg_) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
      terms_.emplace(w, c);
    } else {
      it->second += c;
      if (Coeff<K>::is_zero(it->second)) terms_.erase(it);
    }
  }
  void set(const Word& w, const K& c) {
    terms_.erase(w);
    add(w, c);
  }

  BasicSeries degree_part(int d) const {
    BasicSeries r(alpha_, maxdeg_);
    for (const auto& [w, c] : terms_)
      if (alpha_->word_degree(w) == d) r.terms_.emplace(w, c);
    return r;
  }
  // Keep only degrees <= d but retain the declared truncation.
  BasicSeries up_to(int d) const {
    BasicSeries r(alpha_, maxdeg_);
    for (const auto& [w, c] : terms_)
      if (alpha_->word_degree(w) <= d) r.terms_.emplace(w, c);
    return r;
  }
  // Re-declare truncation; lowering drops terms, raising is explicit.
  BasicSeries with_maxdeg(int D) const {
    BasicSeries r(alpha_, D);
    for (const auto& [w, c] : terms_)
      if (alpha_->word_degree(w) <= D) r.terms_.emplace(w, c);
    return r;
  }
  int min_degree() const {
    int m = maxdeg_ + 1;
    for (const auto& [w, c] : terms_) m = std::min(m, alpha_->word_degree(w));
    return m;
  }
  double max_abs() const {
    double m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, Coeff<K>::magnitude(c));
    return m;
  }
  std::vector<double> max_abs_by_degree() const {
    std::vector<double> v(maxdeg_ + 1, 0.0);
    for (const auto& [w, c] : terms_) {
      int d = alpha_->word_degree(w);
      v[d] = std::max(v[d], Coeff<K>::magnitude(c));
    }
    return v;
  }

  void check_compatible(const BasicSeries& o) const {
    if (!alpha_ || !o.alpha_ || !alpha_->same_as(*o.alpha_))
      throw AlphabetMismatch("series over different alphabets");
    if (maxdeg_ != o.maxdeg_)
      throw TruncationMismatch("series with truncation " + std::to_string(maxdeg_) + " vs " +
                               std::to_string(o.maxdeg_));
  }

  BasicSeries& operator+=(const BasicSeries& o) {
    check_compatible(o);
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }
  BasicSeries& operator-=(const BasicSeries& o) {
    check_compatible(o);
    for (const auto& [w, c] : o.terms_) add(w, -c);
    return *this;
  }
  BasicSeries& operator*=(const K& s) {
    if (Coeff<K>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }
  friend BasicSeries operator+(BasicSeries a, const BasicSeries& b) { return a += b; }
  friend BasicSeries operator-(BasicSeries a, const BasicSeries& b) { return a -= b; }
  friend BasicSeries operator-(BasicSeries a) {
    for (auto& [w, c] : a.terms_) c = -c;
    return a;
  }
  friend BasicSeries operator*(BasicSeries a, const K& s) { return a *= s; }
  friend BasicSeries operator*(const K& s, BasicSeries a) { return a *= s; }

  bool operator==(const BasicSeries& o) const {
    return alpha_->same_as(*o.alpha_) && maxdeg_ == o.maxdeg_ && terms_ == o.terms_;
  }
  bool operator!=(const BasicSeries& o) const { return !(*this == o); }

  std::string to_string() const;

  // Raw access for kernels that build results without per-term truncation checks.
  Map& mutable_terms() { return terms_; }

 private:
  AlphabetPtr alpha_;
  int maxdeg_ = 0;
  Map terms_;
};

using Series = BasicSeries<Rational>;
using ComplexSeries = BasicSeries<Complex>;

template <class K>
std::string coeff_string(const K& c);
template <>
inline std::string coeff_string<Rational>(const Rational& c) { return c.get_str(); }
template <>
inline std::string coeff_string<Complex>(const Complex& c) {
  return "(" + std::to_string(c.real()) + "," + std::to_string(c.imag()) + ")";
}

template <class K>
std::string BasicSeries<K>::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    s += coeff_string(c) + "*" + alpha_->word_string(w);
  }
  return s;
}

// Convert exact series to numeric coefficients.
inline ComplexSeries to_complex(const Series& s) {
  ComplexSeries r(s.alphabet_ptr(), s.maxdeg());
  for (const auto& [w, c] : s.terms()) r.add(w, Coeff<Complex>::from(c));
  return r;
}
template <class K>
BasicSeries<K> convert(const Series& s);
template <>
inline Series convert<Rational>(const Series& s) { return s; }
template <>
inline ComplexSeries convert<Complex>(const Series& s) { return to_complex(s); }

// Tensor table over word pairs (same alphabet on both sides).
template <class K>
struct BasicTensor {
  struct PairLess {
    bool operator()(const std::pair<Word, Word>& a, const std::pair<Word, Word>& b) const {
      WordLess wl;
      if (wl(a.first, b.first)) return true;
      if (wl(b.first, a.first)) return false;
      return wl(a.second, b.second);
    }
  };
  AlphabetPtr alpha;
  int maxdeg = 0;  // on total degree
  std::map<std::pair<Word, Word>, K, PairLess> terms;

  void add(const Word& u, const Word& v, const K& c) {
    if (Coeff<K>::is_zero(c)) return;
    if (alpha->word_degree(u) + alpha->word_degree(v) > maxdeg) return;
    auto key = std::make_pair(u, v);
    auto it = terms.find(key);
    if (it == terms.end()) {
      terms.emplace(std::move(key), c);
    } else {
      it->second += c;
      if (Coeff<K>::is_zero(it->second)) terms.erase(it);
    }
  }
  K coeff(const Word& u, const Word& v) const {
    auto it = terms.find({u, v});
    return it == terms.end() ? Coeff<K>::zero() : it->second;
  }
  BasicTensor operator-(const BasicTensor& o) const {
    BasicTensor r = *this;
    for (const auto& [k, c] : o.terms) r.add(k.first, k.second, -c);
    return r;
  }
  bool is_zero() const { return terms.empty(); }
  double max_abs() const {
    double m = 0;
    for (const auto& [k, c] : terms) m = std::max(m, Coeff<K>::magnitude(c));
    return m;
  }
  std::vector<double> max_abs_by_degree() const {
    std::vector<double> v(maxdeg + 1, 0.0);
    for (const auto& [k, c] : terms) {
      int d = alpha->word_degree(k.first) + alpha->word_degree(k.second);
      v[d] = std::max(v[d], Coeff<K>::magnitude(c));
    }
    return v;
  }
};

using Tensor = BasicTensor<Rational>;

}  // namespace penta
