#pragma once

#include <iosfwd>

namespace mwd::cli {

enum ExitCode { ok = 0, usage = 1, verification_failed = 2, cap_refused = 3 };

/// The mwd command line. Results go to out (or --out), diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mwd::cli
