#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mover::cli {

/// Runs the `mover` command line. Exit codes: 0 success, 1 pipeline error,
/// 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mover::cli
