#pragma once

#include <string>

#include "tlab/config.hpp"

namespace tlab {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    std::string subcommand;
    std::string config_path;
    std::string out_dir;              // overrides config when non-empty
    std::optional<std::uint64_t> seed; // overrides config
    bool quiet = false;
};

// Exit codes: 0 success, 2 config/validation failure, 3 a derived bound or
// assertion failed during the run.
int run_experiment(const RunOptions& opts);

// Schema check only; prints violations to stderr unless quiet.
int run_validate(const std::string& config_path, bool quiet);

// Atomic write helper (temp file + rename), shared by runner and tests.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace tlab
