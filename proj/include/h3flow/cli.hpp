#pragma once

#include <ostream>

namespace h3flow {

/// Command-line entry point. Returns 0 on success, 1 on a computation error
/// (pole, overflow, exhausted budget, failed check) and 2 on a config or
/// usage error. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace h3flow
