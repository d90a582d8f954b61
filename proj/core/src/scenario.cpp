#include "scenagg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace scenagg {

namespace detail {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a_doubles(const std::vector<double>& v, std::uint64_t seed) {
    return v.empty() ? seed : fnv1a(v.data(), v.size() * sizeof(double), seed);
}

std::uint64_t fnv1a_string(const std::string& s, std::uint64_t seed) {
    return fnv1a(s.data(), s.size(), seed);
}

}  // namespace detail

ScenarioSet::ScenarioSet(std::vector<Scenario> scenarios, std::vector<double> weights,
                         std::vector<std::string> channel_labels)
    : scenarios_(std::move(scenarios)),
      weights_(std::move(weights)),
      channel_labels_(std::move(channel_labels)) {
    if (scenarios_.empty()) fail("RaggedInput", "scenario set must contain at least one scenario");
    if (weights_.empty()) weights_.assign(scenarios_.size(), 1.0);
    if (weights_.size() != scenarios_.size())
        fail("RaggedInput", "weight count does not match scenario count");

    const int hours = scenarios_.front().hours;
    const int channels = scenarios_.front().channels;
    if (hours <= 0 || channels <= 0) fail("RaggedInput", "scenario dimensions must be positive");
    if (!channel_labels_.empty() && static_cast<int>(channel_labels_.size()) != channels)
        fail("RaggedInput", "channel label count does not match channel count");

    for (const Scenario& s : scenarios_) {
        if (s.hours != hours || s.channels != channels)
            fail("RaggedInput", "all scenarios must share hours and channels");
        if (s.features.size() != static_cast<std::size_t>(hours) * channels)
            fail("RaggedInput", "feature length must equal hours * channels");
        for (double v : s.features)
            if (!std::isfinite(v)) fail("NonFiniteValue", "scenario features must be finite");
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) fail("NonFiniteValue", "weights must be finite");
        if (w < 0.0) fail("NegativeWeight", "weights must be nonnegative");
    }
    total_weight_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (total_weight_ <= 0.0) fail("NegativeWeight", "total weight must be strictly positive");
}

std::vector<double> ScenarioSet::channel_means() const {
    std::vector<double> means(channels(), 0.0);
    const int h = hours();
    for (std::size_t i = 0; i < size(); ++i) {
        const Scenario& s = scenarios_[i];
        for (int c = 0; c < channels(); ++c) {
            double sum = 0.0;
            for (int t = 0; t < h; ++t) sum += s.value(t, c);
            means[c] += weights_[i] * sum / h;
        }
    }
    for (double& m : means) m /= total_weight_;
    return means;
}

std::uint64_t ScenarioSet::fingerprint() const {
    std::uint64_t h = detail::fnv1a(&total_weight_, sizeof(total_weight_));
    const int dims[2] = {hours(), channels()};
    h = detail::fnv1a(dims, sizeof(dims), h);
    for (const Scenario& s : scenarios_) {
        h = detail::fnv1a(&s.id, sizeof(s.id), h);
        h = detail::fnv1a_doubles(s.features, h);
    }
    h = detail::fnv1a_doubles(weights_, h);
    for (const std::string& label : channel_labels_) h = detail::fnv1a_string(label, h);
    return h;
}

ScenarioSet make_scenario_set(const std::vector<std::vector<double>>& profiles,
                              const std::vector<double>& weights,
                              const std::vector<std::string>& channel_labels) {
    if (profiles.empty()) fail("RaggedInput", "profile matrix is empty");
    if (channel_labels.empty()) fail("RaggedInput", "at least one channel label is required");

    const std::size_t cols = profiles.front().size();
    const std::size_t channels = channel_labels.size();
    if (cols == 0 || cols % channels != 0)
        fail("RaggedInput", "column count must be a positive multiple of the channel count");
    const int hours = static_cast<int>(cols / channels);

    std::vector<Scenario> scenarios;
    scenarios.reserve(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (profiles[i].size() != cols) fail("RaggedInput", "profile matrix is not rectangular");
        Scenario s;
        s.id = static_cast<int>(i);
        s.hours = hours;
        s.channels = static_cast<int>(channels);
        s.features = profiles[i];
        scenarios.push_back(std::move(s));
    }
    return ScenarioSet(std::move(scenarios), weights, channel_labels);
}

std::string to_string(RepKind kind) {
    switch (kind) {
        case RepKind::centroid: return "centroid";
        case RepKind::medoid: return "medoid";
        case RepKind::selected: return "selected";
    }
    return "unknown";
}

void validate_partition(const Partition& p, const ScenarioSet& source) {
    if (p.source_fingerprint != source.fingerprint())
        fail("MismatchedSource", "partition was not built from this scenario set");
    if (p.assignment.size() != source.size())
        fail("MismatchedSource", "assignment length does not match scenario count");
    const int k = p.k();
    if (k <= 0 || p.cluster_weights.size() != static_cast<std::size_t>(k))
        fail("MismatchedSource", "cluster weight count does not match representative count");

    std::vector<double> member_weight(k, 0.0);
    std::vector<int> member_count(k, 0);
    for (std::size_t i = 0; i < p.assignment.size(); ++i) {
        const int c = p.assignment[i];
        if (c < 0 || c >= k) fail("MismatchedSource", "assignment index out of range");
        member_weight[c] += source.weight(i);
        ++member_count[c];
    }
    for (int c = 0; c < k; ++c) {
        if (member_count[c] == 0) fail("MismatchedSource", "empty cluster in partition");
        if (std::abs(member_weight[c] - p.cluster_weights[c]) >
            1e-9 * std::max(1.0, std::abs(member_weight[c])))
            fail("MismatchedSource", "cluster weight does not equal summed member weights");
    }
}

std::vector<std::vector<int>> disaggregate(const Partition& p, const ScenarioSet& source) {
    validate_partition(p, source);
    std::vector<std::vector<int>> members(p.k());
    for (std::size_t i = 0; i < p.assignment.size(); ++i)
        members[p.assignment[i]].push_back(static_cast<int>(i));
    return members;
}

std::uint64_t Provenance::fingerprint() const {
    std::uint64_t h = detail::fnv1a_string(method, 0xcbf29ce484222325ull);
    h = detail::fnv1a_string(params, h);
    h = detail::fnv1a(&source_fingerprint, sizeof(source_fingerprint), h);
    h = detail::fnv1a(&seed, sizeof(seed), h);
    return h;
}

ReducedSet reduced_from_partition(const Partition& p, const ScenarioSet& source,
                                  Provenance provenance) {
    validate_partition(p, source);
    std::vector<Scenario> reps = p.representatives;
    for (std::size_t i = 0; i < reps.size(); ++i) reps[i].id = static_cast<int>(i);
    ReducedSet out{ScenarioSet(std::move(reps), p.cluster_weights, source.channel_labels()),
                   std::move(provenance)};
    return out;
}

}  // namespace scenagg
