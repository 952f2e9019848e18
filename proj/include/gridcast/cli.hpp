#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gridcast {

// Runs the command-line front end. `args` excludes the program name.
// Returns the process exit code: 0 on success, nonzero on any error.
// Data goes to files; `out` carries a one-line summary, `err` diagnostics.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// base seed routed into an independent per-module stream
std::uint64_t stream_seed(std::uint64_t base, const std::string& stream);

}  // namespace gridcast
