#include "scenagg/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenagg/cluster.hpp"

namespace scenagg {

ExplicitMetric explicit_metric_from_string(const std::string& name) {
    if (name == "silhouette") return ExplicitMetric::silhouette;
    if (name == "davies_bouldin") return ExplicitMetric::davies_bouldin;
    if (name == "calinski_harabasz") return ExplicitMetric::calinski_harabasz;
    fail("BadSpec", "unknown explicit metric '" + name + "'");
}

namespace {

double sq_euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double silhouette(const ScenarioSet& s, const Partition& p,
                  const std::vector<std::vector<int>>& members, const DistanceSpec& spec) {
    const int n = static_cast<int>(s.size());
    const Matrix d = distance_matrix(s, spec);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ci = p.assignment[i];
        if (members[ci].size() == 1) continue;  // singleton: per-point score 0
        double a = 0.0;
        for (int j : members[ci])
            if (j != i) a += d(i, j);
        a /= static_cast<double>(members[ci].size() - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < p.k(); ++c) {
            if (c == ci) continue;
            double mean = 0.0;
            for (int j : members[c]) mean += d(i, j);
            mean /= static_cast<double>(members[c].size());
            b = std::min(b, mean);
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / n;
}

double davies_bouldin(const ScenarioSet& s, const Partition& p,
                      const std::vector<std::vector<int>>& members) {
    const int k = p.k();
    std::vector<std::vector<double>> centroids(k);
    std::vector<double> scatter(k, 0.0);
    for (int c = 0; c < k; ++c) {
        std::vector<double> mean(s.scenario(0).dim(), 0.0);
        double w = 0.0;
        for (int i : members[c]) {
            w += s.weight(i);
            for (std::size_t dd = 0; dd < mean.size(); ++dd)
                mean[dd] += s.weight(i) * s.scenario(i).features[dd];
        }
        for (double& v : mean) v /= w;
        centroids[c] = std::move(mean);
        double sc = 0.0;
        for (int i : members[c]) sc += s.weight(i) * sq_euclid(s.scenario(i).features, centroids[c]);
        scatter[c] = sc / w;
    }
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            const double m = sq_euclid(centroids[i], centroids[j]);
            if (m > 0.0) worst = std::max(worst, (scatter[i] + scatter[j]) / m);
        }
        total += worst;
    }
    return total / k;
}

double calinski_harabasz(const ScenarioSet& s, const Partition& p,
                         const std::vector<std::vector<int>>& members) {
    const int k = p.k();
    const int n = static_cast<int>(s.size());
    std::vector<double> global(s.scenario(0).dim(), 0.0);
    double wtot = 0.0;
    for (int i = 0; i < n; ++i) {
        wtot += s.weight(i);
        for (std::size_t d = 0; d < global.size(); ++d)
            global[d] += s.weight(i) * s.scenario(i).features[d];
    }
    for (double& v : global) v /= wtot;

    double between = 0.0, within = 0.0;
    for (int c = 0; c < k; ++c) {
        std::vector<double> mean(global.size(), 0.0);
        double w = 0.0;
        for (int i : members[c]) {
            w += s.weight(i);
            for (std::size_t d = 0; d < mean.size(); ++d)
                mean[d] += s.weight(i) * s.scenario(i).features[d];
        }
        for (double& v : mean) v /= w;
        between += w * sq_euclid(mean, global);
        for (int i : members[c]) within += s.weight(i) * sq_euclid(s.scenario(i).features, mean);
    }
    if (within <= 0.0) return std::numeric_limits<double>::infinity();
    return (between / (k - 1)) / (within / (wtot - k));
}

}  // namespace

double explicit_metric(const ScenarioSet& s, const Partition& p, ExplicitMetric metric,
                       const DistanceSpec& spec) {
    validate_partition(p, s);
    if (p.k() < 2) fail("SingleCluster", "explicit metrics need at least two clusters");
    const auto members = disaggregate(p, s);
    switch (metric) {
        case ExplicitMetric::silhouette: return silhouette(s, p, members, spec);
        case ExplicitMetric::davies_bouldin: return davies_bouldin(s, p, members);
        case ExplicitMetric::calinski_harabasz: return calinski_harabasz(s, p, members);
    }
    fail("BadSpec", "unknown explicit metric");
}

GapReport gap_report(double full_obj, double reduced_obj, double oos_obj) {
    if (!(full_obj > 0.0)) fail("NonPositiveBase", "full objective must be positive");
    GapReport r;
    r.full_objective = full_obj;
    r.reduced_objective = reduced_obj;
    r.oos_objective = oos_obj;
    r.in_sample_relative = reduced_obj / full_obj;
    r.oos_relative = oos_obj / full_obj;
    r.oos_gap_pct = 100.0 * (oos_obj - full_obj) / full_obj;
    r.in_sample_gap_pct = 100.0 * std::abs(reduced_obj - full_obj) / full_obj;
    return r;
}

}  // namespace scenagg
