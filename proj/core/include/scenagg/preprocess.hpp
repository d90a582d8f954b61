#pragma once

#include <string>
#include <vector>

#include "scenagg/scenario.hpp"

namespace scenagg {

enum class NormMethod { zscore, minmax, maxabs, none };

NormMethod norm_method_from_string(const std::string& name);
std::string to_string(NormMethod m);

struct NormalizationSpec {
    NormMethod method = NormMethod::zscore;
    bool per_channel = true;
};

/// Affine per-channel (or global) transform captured during normalization,
/// sufficient to undo it: x = z * scale + offset.
struct NormalizationRecord {
    NormalizationSpec spec;
    std::vector<double> scale;   // one per channel, or a single entry when global
    std::vector<double> offset;

    ScenarioSet inverse(const ScenarioSet& normalized) const;
};

struct NormalizeResult {
    ScenarioSet set;
    NormalizationRecord record;
};

/// Normalizes the feature values of a scenario set. zscore uses the
/// population standard deviation; minmax maps the observed range onto
/// [0, 1]; maxabs divides by the largest absolute value. Statistics are
/// weighted by scenario weights. Throws DegenerateChannel when a channel
/// is constant (zscore/minmax) or identically zero (maxabs).
NormalizeResult normalize(const ScenarioSet& s, const NormalizationSpec& spec);

/// Multiplicative mean-matching: scales each representative channel so the
/// cluster-weighted mean profile matches the source set's weighted mean.
/// Only meaningful for medoid/selected representatives; centroid partitions
/// are rejected (they are already weight-consistent).
Partition rescale_representatives(const Partition& p, const ScenarioSet& source);

/// Same mean-matching applied to a reduced set against its source set.
ScenarioSet rescale_to_source_means(const ScenarioSet& reduced, const ScenarioSet& source);

}  // namespace scenagg
