#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenagg/error.hpp"

namespace scenagg {

/// One realization of the uncertain daily profiles. The feature vector is
/// the concatenation of all channels' hourly values, channel-major:
/// features[c * hours + h] is channel c at hour h.
struct Scenario {
    int id = 0;
    int hours = 0;
    int channels = 0;
    std::vector<double> features;

    double value(int hour, int channel) const {
        return features[static_cast<std::size_t>(channel) * hours + hour];
    }
    double& value(int hour, int channel) {
        return features[static_cast<std::size_t>(channel) * hours + hour];
    }
    std::size_t dim() const { return features.size(); }
};

/// Weighted collection of equal-length multivariate daily profiles.
/// Weights are real-valued counts (e.g. cluster sizes); probabilities are
/// weights normalized by their total.
class ScenarioSet {
public:
    ScenarioSet() = default;
    ScenarioSet(std::vector<Scenario> scenarios, std::vector<double> weights,
                std::vector<std::string> channel_labels);

    std::size_t size() const { return scenarios_.size(); }
    bool empty() const { return scenarios_.empty(); }
    int hours() const { return scenarios_.empty() ? 0 : scenarios_.front().hours; }
    int channels() const { return scenarios_.empty() ? 0 : scenarios_.front().channels; }

    const Scenario& scenario(std::size_t i) const { return scenarios_[i]; }
    const std::vector<Scenario>& scenarios() const { return scenarios_; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    double total_weight() const { return total_weight_; }
    double probability(std::size_t i) const { return weights_[i] / total_weight_; }
    const std::vector<std::string>& channel_labels() const { return channel_labels_; }

    /// Per-channel weighted mean over all scenarios and hours.
    std::vector<double> channel_means() const;

    /// FNV-1a hash over dimensions, features, weights and labels.
    std::uint64_t fingerprint() const;

private:
    std::vector<Scenario> scenarios_;
    std::vector<double> weights_;
    std::vector<std::string> channel_labels_;
    double total_weight_ = 0.0;
};

/// Builds a validated ScenarioSet from a rectangular profile matrix
/// (one row per scenario, hours*channels columns, channel-major). Empty
/// weights mean uniform weight 1 per scenario. Channel count is taken from
/// the label list.
ScenarioSet make_scenario_set(const std::vector<std::vector<double>>& profiles,
                              const std::vector<double>& weights,
                              const std::vector<std::string>& channel_labels);

enum class RepKind { centroid, medoid, selected };

std::string to_string(RepKind kind);

/// Assignment of scenarios to clusters plus per-cluster representative
/// and aggregate weight.
struct Partition {
    std::vector<int> assignment;            // scenario index -> cluster in 0..k-1
    std::vector<Scenario> representatives;  // one per cluster
    RepKind rep_kind = RepKind::centroid;
    std::vector<double> cluster_weights;
    std::uint64_t source_fingerprint = 0;

    int k() const { return static_cast<int>(representatives.size()); }
};

/// Checks the Partition invariants against its source set: every cluster
/// nonempty, cluster weights equal summed member weights, totals conserved.
void validate_partition(const Partition& p, const ScenarioSet& source);

/// Cluster index -> member scenario ids; coverage and disjointness hold by
/// construction. Throws MismatchedSource when p was built from another set.
std::vector<std::vector<int>> disaggregate(const Partition& p, const ScenarioSet& source);

/// Reduction provenance: enough to reproduce the run.
struct Provenance {
    std::string method;
    std::string params;
    std::uint64_t source_fingerprint = 0;
    std::uint64_t seed = 0;

    std::uint64_t fingerprint() const;
};

/// A reduced ScenarioSet with provenance; total weight equals the source
/// set's total (probability redistribution conserves mass).
struct ReducedSet {
    ScenarioSet set;
    Provenance provenance;
};

/// Turns a Partition into a ReducedSet (representatives become scenarios,
/// cluster weights become weights), preserving the source channel labels.
ReducedSet reduced_from_partition(const Partition& p, const ScenarioSet& source,
                                  Provenance provenance);

namespace detail {

/// FNV-1a over raw bytes; the basis for all provenance fingerprints.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a_doubles(const std::vector<double>& v, std::uint64_t seed);
std::uint64_t fnv1a_string(const std::string& s, std::uint64_t seed);

}  // namespace detail

}  // namespace scenagg
