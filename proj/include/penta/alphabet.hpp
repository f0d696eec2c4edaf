#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace penta {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

// Shortlex: by length, then lexicographic on letter indices.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Letter c : w) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= w.size();
    return static_cast<std::size_t>(h);
  }
};

enum class AlphabetKind { F2, FN1, YN, FreeLift, Custom };

std::string kind_name(AlphabetKind k);
AlphabetKind parse_kind(const std::string& s);

class Alphabet {
 public:
  Alphabet(AlphabetKind kind, std::string name, std::vector<std::string> letters,
           std::vector<int> degrees, int level);

  AlphabetKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int level() const { return level_; }
  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& letter(Letter i) const { return letters_.at(i); }
  const std::vector<std::string>& letters() const { return letters_; }
  int degree(Letter i) const { return degrees_.at(i); }
  const std::vector<int>& degrees() const { return degrees_; }
  bool uniform_degree_one() const { return all_one_; }

  std::optional<Letter> find(const std::string& sym) const;
  Letter at(const std::string& sym) const;  // throws on unknown symbol

  int word_degree(const Word& w) const;
  std::string word_string(const Word& w) const;

  bool same_as(const Alphabet& o) const {
    return this == &o || (kind_ == o.kind_ && name_ == o.name_ && letters_ == o.letters_ &&
                          degrees_ == o.degrees_ && level_ == o.level_);
  }

 private:
  AlphabetKind kind_;
  std::string name_;
  std::vector<std::string> letters_;
  std::vector<int> degrees_;
  int level_;
  bool all_one_ = true;
  std::unordered_map<std::string, Letter> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

AlphabetPtr alphabet_f2();              // A, B
AlphabetPtr alphabet_fn1(int N);        // A, B0..B{N-1}
AlphabetPtr alphabet_y(int N, int maxw);  // Y{n}_{a}, 1<=n<=maxw
AlphabetPtr alphabet_custom(std::string name, std::vector<std::string> letters,
                            std::vector<int> degrees = {}, int level = 1);

// Letter indices in F_{N+1}.
inline Letter letter_A() { return 0; }
inline Letter letter_B(int a, int N) { return static_cast<Letter>(1 + ((a % N) + N) % N); }
// Y_{n,a} inside alphabet_y(N, maxw)
inline Letter letter_Y(int n, int a, int N) {
  return static_cast<Letter>((n - 1) * N + ((a % N) + N) % N);
}

}  // namespace penta
