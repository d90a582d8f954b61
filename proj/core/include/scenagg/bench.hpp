#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenagg/cluster.hpp"
#include "scenagg/preprocess.hpp"
#include "scenagg/reduce.hpp"
#include "scenagg/report.hpp"
#include "scenagg/tep.hpp"

namespace scenagg {

/// One aggregation method of the benchmark: family, representation and
/// parameters. Parsed from strings like "kmeans:centroid",
/// "hac:ward:medoid", "fsa:dupacova", "mda", "ctpc:ward:centroid",
/// "som:centroid", "spectral".
struct MethodSpec {
    enum class Family { kmeans, kmedoids, hac, ctpc, fsa, mda, som, spectral };

    Family family = Family::kmeans;
    LinkageKind linkage = LinkageKind::ward;              // hac / ctpc
    CostKind cost = CostKind::dupacova;                   // fsa
    RepresentativeKind representation = RepresentativeKind::centroid;
    DistanceSpec distance = DistanceSpec::euclidean();
    std::uint64_t seed = 0;  // filled from the root seed by the runner

    std::string name() const;
    static MethodSpec parse(const std::string& text);

    /// fsa and mda always select members; kmedoids asked for centroids
    /// falls back to the weighted member mean.
    bool selects_members() const { return family == Family::fsa || family == Family::mda; }
};

/// The paper's 16 methods: {kmeans, kmedoids, hac x 4 linkages} x
/// {centroid, medoid}, fsa x 3 cost functions, mda.
std::vector<MethodSpec> default_method_specs();

struct BenchOptions {
    int k_min = 1;
    int k_max = 10;
    double mip_gap = 0.001;
    std::uint64_t seed = 1;
    int repeats = 5;   // runtime measurement repetitions
    int workers = 2;
    NormMethod normalization = NormMethod::zscore;
    bool per_channel = true;
    bool rescale_representatives = false;  // multiplicative mean-matching of member reps
    std::string log_dir;                   // per-cell solver logs when nonempty
    std::int64_t node_limit = -1;
    double time_limit = -1.0;
};

/// Applies one reduction method at size k. Clustering happens on the
/// normalized features; representatives and selections are materialized
/// from the raw scenario set.
ReducedSet apply_method(const MethodSpec& method, const ScenarioSet& raw,
                        const ScenarioSet& normalized, int k,
                        const std::optional<std::vector<double>>& dp_context,
                        const std::optional<std::vector<double>>& ss_context);

/// Runs the six-step benchmark: full solve, per-(method, K) reduction and
/// reduced solves, optimal-K selection by smallest in-sample gap, OOS
/// evaluation at the optimal K, and runtime measurement at the largest K.
/// Failed cells are recorded with their error code and skipped.
BenchmarkReport run_benchmark(const Network& net, const ScenarioSet& scenarios,
                              const std::vector<MethodSpec>& methods, const BenchOptions& opts);

/// Loadability sensitivity: scales every demand channel by each level and
/// solves the full problem, recording wall time, node counts and the gap
/// trajectory per level.
std::vector<SensitivityRow> run_sensitivity(const Network& net, const ScenarioSet& scenarios,
                                            const std::vector<double>& load_levels,
                                            const BenchOptions& opts);

}  // namespace scenagg
