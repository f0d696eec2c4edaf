#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace penta::cli {

enum Exit : int { kPass = 0, kFail = 1, kInvalid = 2, kInternal = 3 };

// args excludes the program name. Human summary (or the JSON report with --json) goes to
// `out`; progress lines and error messages go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace penta::cli
