#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "penta/echelon.hpp"

namespace penta::cache {

inline constexpr std::uint32_t kFormatVersion = 1;

// Root directory from PENTA_CACHE; disabled when unset or empty.
std::optional<std::filesystem::path> root();

std::filesystem::path entry_path(const std::filesystem::path& dir, const std::string& key,
                                 int degree);

// Returns false on a miss, a version mismatch, or a checksum failure.
bool load(const std::string& key, int degree, Echelon& out);
// Writes to a temporary file and renames it into place.
void store(const std::string& key, int degree, const Echelon& e);

bool load_file(const std::filesystem::path& p, int degree, Echelon& out);
void store_file(const std::filesystem::path& p, int degree, const Echelon& e);

}  // namespace penta::cache
