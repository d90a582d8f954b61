#pragma once

#include <string>

#include "scenagg/distance.hpp"
#include "scenagg/scenario.hpp"

namespace scenagg {

enum class ExplicitMetric { silhouette, davies_bouldin, calinski_harabasz };

ExplicitMetric explicit_metric_from_string(const std::string& name);

/// Partition-quality score. Silhouette uses the supplied distance spec and
/// lies in [-1, 1] (higher better; singleton points score 0);
/// Davies-Bouldin and Calinski-Harabasz use squared Euclidean geometry.
/// Requires at least two clusters.
double explicit_metric(const ScenarioSet& s, const Partition& p, ExplicitMetric metric,
                       const DistanceSpec& spec = DistanceSpec::euclidean());

/// Implicit optimization-gap record comparing full, reduced (in-sample)
/// and out-of-sample objectives.
struct GapReport {
    double full_objective = 0.0;
    double reduced_objective = 0.0;
    double oos_objective = 0.0;
    double in_sample_relative = 0.0;  // reduced / full
    double oos_relative = 0.0;        // oos / full
    double oos_gap_pct = 0.0;         // 100 * (oos - full) / full
    double in_sample_gap_pct = 0.0;   // 100 * |reduced - full| / full
};

GapReport gap_report(double full_obj, double reduced_obj, double oos_obj);

}  // namespace scenagg
