#pragma once

#include <iosfwd>

namespace geocomm::cli {

/// Exit codes: 0 success, 1 internal error, 2 input error, 3 infeasible
/// configuration.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geocomm::cli
