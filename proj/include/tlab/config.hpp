#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlab/potential.hpp"

namespace tlab {

struct SolverConfig {
    double r_max = 20.0;
    int n = 2000;
    int basis_size = 60;
    int pool = 12;
    double b_min = 0.3;
    double b_max = 60.0;
    std::optional<std::uint64_t> seed;
};

struct ExperimentParams {
    std::vector<double> lambda_schedule;
    std::vector<double> l_values;
    std::vector<double> k_values;
    std::vector<double> epsilons;
    std::vector<double> q_values;
    double lambda = 0.0;
    double tol = 1e-3;
    // defs-probe grid (long-range probe needs its own extent)
    double probe_r_max = 400.0;
    int probe_n = 20000;
    // threebody-absorption
    int extra = 20;
    double lambda_hint = 0.0;
    std::optional<double> delta_min;   // schedule in lambda_cr*(1+delta) form
    std::optional<double> delta_max;
    int schedule_points = 0;
};

struct OutputConfig {
    std::string directory = ".";
    std::vector<std::string> formats = {"json", "csv"};
};

struct ExperimentConfig {
    SystemSpec system;
    SolverConfig solver;
    ExperimentParams experiment;
    OutputConfig output;
};

// Parse + schema-validate; unknown keys are violations. Throws nothing:
// violations are returned (empty means valid).
std::vector<std::string> validate_config(const nlohmann::json& j);

// Parse into the struct; throws std::invalid_argument listing violations.
ExperimentConfig load_config(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& c);

} // namespace tlab
