#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sparseseries::cli {

/// Entry point behind the sparse-series binary. Returns the process exit
/// code: 0 for a completed run (even with FAIL-trend verdicts), 1 for usage
/// errors, 2 for computational errors (horizons, majorants, budgets).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparseseries::cli
