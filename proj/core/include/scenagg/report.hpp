#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenagg/milp.hpp"

namespace scenagg {

/// One (method, K) cell of the benchmark sweep.
struct MethodCell {
    std::string method;
    int k = 0;
    std::string status = "ok";  // or the error code of a failed cell
    double in_sample_objective = 0.0;
    double in_sample_gap_pct = 0.0;
    std::vector<std::string> built_lines;
    std::vector<double> capacities_mw;
    std::uint64_t provenance = 0;
    double reduce_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// Per-method summary at the optimal K (smallest in-sample gap).
struct MethodSummary {
    std::string method;
    int optimal_k = 0;
    double in_sample_objective = 0.0;
    double oos_objective = 0.0;
    double oos_gap_pct = 0.0;
    std::vector<std::string> built_lines;
    std::vector<double> capacities_mw;
    double method_time_mean = 0.0;  // reduction time at max K, mean over repeats
    double method_time_sd = 0.0;
    double total_time = 0.0;        // reduction + solve at max K
};

struct BenchmarkReport {
    std::string network_name;
    std::uint64_t scenario_fingerprint = 0;
    std::uint64_t seed = 0;
    double mip_gap = 0.0;
    int k_min = 0, k_max = 0;
    int full_num_scenarios = 0;
    double full_objective = 0.0;
    std::vector<std::string> full_built_lines;
    std::vector<double> full_capacities_mw;
    std::vector<MethodCell> cells;
    std::vector<MethodSummary> methods;
};

/// One demand-scaling level of the loadability sensitivity sweep.
struct SensitivityRow {
    double load_level = 1.0;  // demand multiplier
    double seconds = 0.0;
    std::int64_t nodes = 0;
    double objective = 0.0;
    double achieved_gap = 0.0;
    std::vector<BnbTrajectoryPoint> trajectory;
};

}  // namespace scenagg
