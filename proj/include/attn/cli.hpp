#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace attn {

/// Command-line entry point. args excludes the program name. Returns 0 on
/// success, 1 for negative verdicts (false, no solution, not bisimilar, not
/// applicable) and 2 for usage or validation errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace attn
