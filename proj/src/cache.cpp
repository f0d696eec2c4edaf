#include "penta/cache.hpp"

#include <unistd.h>

#include <boost/crc.hpp>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace penta::cache {

namespace {

constexpr char kMagic[8] = {'P', 'E', 'N', 'T', 'A', 'E', 'C', 'H'};

template <class T>
void put(std::string& buf, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  buf.append(b, sizeof(T));
}

template <class T>
bool get(const std::string& buf, std::size_t& pos, T& v) {
  if (pos + sizeof(T) > buf.size()) return false;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return true;
}

std::uint32_t crc(const char* p, std::size_t n) {
  boost::crc_32_type c;
  c.process_bytes(p, n);
  return c.checksum();
}

}  // namespace

std::optional<std::filesystem::path> root() {
  const char* e = std::getenv("PENTA_CACHE");
  if (!e || !*e) return std::nullopt;
  return std::filesystem::path(e);
}

std::filesystem::path entry_path(const std::filesystem::path& dir, const std::string& key,
                                 int degree) {
  return dir / (key + "_d" + std::to_string(degree) + ".ech");
}

void store_file(const std::filesystem::path& p, int degree, const Echelon& e) {
  std::string buf(kMagic, sizeof kMagic);
  put<std::uint32_t>(buf, kFormatVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(degree));
  put<std::uint64_t>(buf, e.rows.size());
  for (const auto& r : e.rows) {
    put<std::uint64_t>(buf, r.cols.size());
    for (auto c : r.cols) put<std::uint64_t>(buf, c);
    for (const auto& v : r.vals) {
      std::string s = v.get_str();
      put<std::uint32_t>(buf, static_cast<std::uint32_t>(s.size()));
      buf += s;
    }
  }
  put<std::uint32_t>(buf, crc(buf.data(), buf.size()));

  std::filesystem::create_directories(p.parent_path());
  std::random_device rd;
  auto tmp = p;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("cache: write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

bool load_file(const std::filesystem::path& p, int degree, Echelon& out) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string buf = ss.str();
  if (buf.size() < sizeof kMagic + 4 + 4 + 8 + 4) return false;
  if (std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0) return false;
  std::uint32_t stored;
  std::memcpy(&stored, buf.data() + buf.size() - 4, 4);
  if (crc(buf.data(), buf.size() - 4) != stored) return false;

  std::size_t pos = sizeof kMagic;
  std::uint32_t ver, deg;
  std::uint64_t nrows;
  if (!get(buf, pos, ver) || ver != kFormatVersion) return false;
  if (!get(buf, pos, deg) || static_cast<int>(deg) != degree) return false;
  if (!get(buf, pos, nrows)) return false;
  Echelon e;
  e.rows.resize(nrows);
  for (auto& r : e.rows) {
    std::uint64_t len;
    if (!get(buf, pos, len) || len > buf.size()) return false;
    r.cols.resize(len);
    for (auto& c : r.cols)
      if (!get(buf, pos, c)) return false;
    r.vals.resize(len);
    for (auto& v : r.vals) {
      std::uint32_t sl;
      if (!get(buf, pos, sl) || pos + sl > buf.size()) return false;
      if (v.set_str(buf.substr(pos, sl), 10) != 0) return false;
      pos += sl;
    }
  }
  if (pos != buf.size() - 4) return false;
  e.index();
  out = std::move(e);
  return true;
}

bool load(const std::string& key, int degree, Echelon& out) {
  auto r = root();
  if (!r) return false;
  return load_file(entry_path(*r, key, degree), degree, out);
}

void store(const std::string& key, int degree, const Echelon& e) {
  auto r = root();
  if (!r) return;
  try {
    store_file(entry_path(*r, key, degree), degree, e);
  } catch (const std::exception&) {
    // an unwritable cache only costs recomputation
  }
}

}  // namespace penta::cache
