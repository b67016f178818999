#pragma once

#include <ostream>

namespace svs {

/// Exit codes: 0 ok, 1 solve ran but found no zero, 2 usage error, 3 capacity exceeded.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace svs
