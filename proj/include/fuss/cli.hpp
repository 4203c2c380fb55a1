#pragma once

#include <string>
#include <vector>

namespace fuss {

/// Entry point behind the `fuss` binary, callable from tests.
/// Subcommands: run, sweep, histogram, pairdist, tsp.
/// Exit codes: 0 success, 1 config error, 2 runtime error.
int cli_main(const std::vector<std::string>& args);

} // namespace fuss
