#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "penta/ncseries.hpp"

namespace penta {

struct NotPrimitive : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

bool is_lyndon(const Word& w);
// Lyndon words of the given (weighted) degree, in shortlex order.
std::vector<Word> lyndon_words(const Alphabet& a, int degree);
// Necklace count (1/n) sum_{d|n} mu(d) k^{n/d}.
long witt_dimension(int n, int k);

struct LieSeries {
  AlphabetPtr alpha;
  int maxdeg = 0;
  std::map<Word, Rational, WordLess> coords;  // Lyndon word -> coordinate
};

// Standard bracketing P_w and the triangular change of basis.
// P_w = w + (lexicographically larger words of the same degree).
class LyndonBasis {
 public:
  LyndonBasis(AlphabetPtr a, int maxdeg);

  const std::vector<Word>& words(int d) const { return words_.at(d); }
  const Series& bracket(const Word& lyndon) const;

  Series to_series(const LieSeries& x) const;
  LieSeries from_series(const Series& x) const;  // throws NotPrimitive

  const AlphabetPtr& alphabet() const { return alpha_; }
  int maxdeg() const { return D_; }

 private:
  AlphabetPtr alpha_;
  int D_;
  std::vector<std::vector<Word>> words_;
  mutable std::mutex mu_;
  mutable std::map<Word, Series, WordLess> memo_;
};

}  // namespace penta
