#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace twoit::cli {

// Bundled reference analyses with pinned expected values, plus the table
// and figure sweeps. Each mode writes its data files and a report
// (report.txt / report.json) under out_dir, and prints one PASS/FAIL line
// per pinned value.
//
// Modes: example1, example2, example3, or-consistency, tables, figures.
//
// Returns 0 when every pinned value lies in its band, 1 otherwise.
int run_replicate(const std::string& mode, const std::string& out_dir, std::uint64_t seed,
                  const std::vector<int>& table_n, const std::string& figures_only, int workers);

}  // namespace twoit::cli
