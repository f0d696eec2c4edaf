#include "penta/alphabet.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace penta {

std::string kind_name(AlphabetKind k) {
  switch (k) {
    case AlphabetKind::F2: return "F2";
    case AlphabetKind::FN1: return "F_{N+1}";
    case AlphabetKind::YN: return "Y_N";
    case AlphabetKind::FreeLift: return "free-lift";
    case AlphabetKind::Custom: return "custom";
  }
  return "custom";
}

AlphabetKind parse_kind(const std::string& s) {
  if (s == "F2") return AlphabetKind::F2;
  if (s == "F_{N+1}") return AlphabetKind::FN1;
  if (s == "Y_N") return AlphabetKind::YN;
  if (s == "free-lift") return AlphabetKind::FreeLift;
  if (s == "custom") return AlphabetKind::Custom;
  throw std::invalid_argument("unknown alphabet kind '" + s + "'");
}

Alphabet::Alphabet(AlphabetKind kind, std::string name, std::vector<std::string> letters,
                   std::vector<int> degrees, int level)
    : kind_(kind), name_(std::move(name)), letters_(std::move(letters)),
      degrees_(std::move(degrees)), level_(level) {
  if (letters_.size() > 255) throw std::invalid_argument("alphabet too large");
  if (degrees_.empty()) degrees_.assign(letters_.size(), 1);
  if (degrees_.size() != letters_.size())
    throw std::invalid_argument("alphabet: degree list length mismatch");
  if (level_ < 1) throw std::invalid_argument("alphabet: level must be >= 1");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (degrees_[i] < 1) throw std::invalid_argument("alphabet: letter degree < 1");
    if (degrees_[i] != 1) all_one_ = false;
    if (!index_.emplace(letters_[i], static_cast<Letter>(i)).second)
      throw std::invalid_argument("alphabet: duplicate letter " + letters_[i]);
  }
}

std::optional<Letter> Alphabet::find(const std::string& sym) const {
  auto it = index_.find(sym);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Letter Alphabet::at(const std::string& sym) const {
  auto l = find(sym);
  if (!l) throw std::invalid_argument("unknown letter '" + sym + "' in alphabet " + name_);
  return *l;
}

int Alphabet::word_degree(const Word& w) const {
  if (all_one_) return static_cast<int>(w.size());
  int d = 0;
  for (Letter c : w) d += degrees_[c];
  return d;
}

std::string Alphabet::word_string(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += letters_[w[i]];
  }
  return s;
}

namespace {
std::mutex g_mu;
std::map<std::pair<int, int>, AlphabetPtr> g_fn1, g_y;
}  // namespace

AlphabetPtr alphabet_f2() {
  static AlphabetPtr a =
      std::make_shared<Alphabet>(AlphabetKind::F2, "F2", std::vector<std::string>{"A", "B"},
                                 std::vector<int>{1, 1}, 1);
  return a;
}

AlphabetPtr alphabet_fn1(int N) {
  if (N < 1) throw std::invalid_argument("level N must be >= 1");
  std::lock_guard<std::mutex> lk(g_mu);
  auto& slot = g_fn1[{N, 0}];
  if (!slot) {
    std::vector<std::string> l{"A"};
    for (int a = 0; a < N; ++a) l.push_back("B" + std::to_string(a));
    slot = std::make_shared<Alphabet>(AlphabetKind::FN1, "F" + std::to_string(N + 1), l,
                                      std::vector<int>{}, N);
  }
  return slot;
}

AlphabetPtr alphabet_y(int N, int maxw) {
  if (N < 1 || maxw < 1) throw std::invalid_argument("alphabet_y: bad parameters");
  std::lock_guard<std::mutex> lk(g_mu);
  auto& slot = g_y[{N, maxw}];
  if (!slot) {
    std::vector<std::string> l;
    std::vector<int> d;
    for (int n = 1; n <= maxw; ++n)
      for (int a = 0; a < N; ++a) {
        l.push_back("Y" + std::to_string(n) + "_" + std::to_string(a));
        d.push_back(n);
      }
    slot = std::make_shared<Alphabet>(AlphabetKind::YN, "Y" + std::to_string(N) + "w" +
                                                            std::to_string(maxw),
                                      l, d, N);
  }
  return slot;
}

AlphabetPtr alphabet_custom(std::string name, std::vector<std::string> letters,
                            std::vector<int> degrees, int level) {
  return std::make_shared<Alphabet>(AlphabetKind::Custom, std::move(name), std::move(letters),
                                    std::move(degrees), level);
}

}  // namespace penta
