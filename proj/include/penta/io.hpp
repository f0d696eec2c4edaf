#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "penta/barcx.hpp"
#include "penta/equations.hpp"

namespace penta::io {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "penta/1";

// Malformed document; `where` is a JSON pointer to the offending element.
struct ParseError : std::runtime_error {
  std::string where;
  ParseError(const std::string& where_, const std::string& what)
      : std::runtime_error(where_ + ": " + what), where(where_) {}
};

// Series over F_2 or F_{N+1}.
Json series_to_json(const Series& s);
Series series_from_json(const Json& j, const std::string& where = "");

Json pair_to_json(const AssociatorPair& p);
AssociatorPair pair_from_json(const Json& j);

Json bar_to_json(const BarTensor& b);
BarTensor bar_from_json(const Json& j, const std::string& where = "");

// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);
Json parse_text(const std::string& text);
Json read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const Json& j);

// Parses the document by its "kind", re-serializes it, and checks that parsing the output
// gives the same object and the same bytes.
bool roundtrip(const std::filesystem::path& p);

}  // namespace penta::io
