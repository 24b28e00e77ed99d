#pragma once

#include "xxz/run_config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace xxz {

inline constexpr const char* kToolName = "xxz-lindblad";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
    int threads = 0;  // 0 = hardware concurrency
    bool quiet = false;
    std::optional<std::string> output_dir;  // overrides config
    std::vector<std::string> task_names;    // overrides config when non-empty
};

/// Executes the configured tasks and writes the result files. Returns the
/// process exit status: 0 on success, 2 on configuration errors, 3 on
/// numerical-quality failures (an error record is written either way).
int run_tasks(RunConfig config, const RunOptions& options = {});

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace xxz
