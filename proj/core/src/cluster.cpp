#include "scenagg/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scenagg/rng.hpp"

namespace scenagg {

LinkageKind linkage_from_string(const std::string& name) {
    if (name == "ward") return LinkageKind::ward;
    if (name == "minmax") return LinkageKind::minmax;
    if (name == "complete") return LinkageKind::complete;
    if (name == "single") return LinkageKind::single;
    if (name == "average") return LinkageKind::average;
    if (name == "centroid") return LinkageKind::centroid_link;
    fail("BadSpec", "unknown linkage '" + name + "'");
}

std::string to_string(LinkageKind linkage) {
    switch (linkage) {
        case LinkageKind::ward: return "ward";
        case LinkageKind::minmax: return "minmax";
        case LinkageKind::complete: return "complete";
        case LinkageKind::single: return "single";
        case LinkageKind::average: return "average";
        case LinkageKind::centroid_link: return "centroid";
    }
    return "unknown";
}

RepresentativeKind representative_kind_from_string(const std::string& name) {
    if (name == "centroid") return RepresentativeKind::centroid;
    if (name == "medoid") return RepresentativeKind::medoid;
    if (name == "closest_to_centroid") return RepresentativeKind::closest_to_centroid;
    fail("BadSpec", "unknown representative kind '" + name + "'");
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

std::vector<double> weighted_mean(const ScenarioSet& s, const std::vector<int>& members) {
    std::vector<double> mean(s.scenario(0).dim(), 0.0);
    double wsum = 0.0;
    for (int i : members) {
        const double w = s.weight(i);
        wsum += w;
        const auto& f = s.scenario(i).features;
        for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += w * f[d];
    }
    for (double& v : mean) v /= wsum;
    return mean;
}

Scenario make_rep(const ScenarioSet& s, std::vector<double> features, int id) {
    Scenario rep;
    rep.id = id;
    rep.hours = s.hours();
    rep.channels = s.channels();
    rep.features = std::move(features);
    return rep;
}

// Compacts arbitrary cluster ids so cluster 0 contains the smallest
// scenario id, cluster 1 the next-smallest not yet covered, and so on.
std::vector<int> compact_assignment(const std::vector<int>& raw) {
    std::vector<int> remap(raw.size(), -1);
    int next = 0;
    std::vector<int> out(raw.size());
    std::vector<int> seen;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const int c = raw[i];
        auto it = std::find(seen.begin(), seen.end(), c);
        if (it == seen.end()) {
            seen.push_back(c);
            remap[seen.size() - 1] = next++;
            out[i] = remap[seen.size() - 1];
        } else {
            out[i] = remap[static_cast<std::size_t>(it - seen.begin())];
        }
    }
    return out;
}

}  // namespace

Partition make_partition(const ScenarioSet& source, const std::vector<int>& assignment) {
    if (assignment.size() != source.size())
        fail("MismatchedSource", "assignment length does not match scenario count");
    Partition p;
    p.assignment = compact_assignment(assignment);
    const int k = *std::max_element(p.assignment.begin(), p.assignment.end()) + 1;
    std::vector<std::vector<int>> members(k);
    for (std::size_t i = 0; i < p.assignment.size(); ++i)
        members[p.assignment[i]].push_back(static_cast<int>(i));
    p.cluster_weights.assign(k, 0.0);
    for (int c = 0; c < k; ++c) {
        for (int i : members[c]) p.cluster_weights[c] += source.weight(i);
        p.representatives.push_back(make_rep(source, weighted_mean(source, members[c]), c));
    }
    p.rep_kind = RepKind::centroid;
    p.source_fingerprint = source.fingerprint();
    return p;
}

double weighted_inertia(const ScenarioSet& s, const Partition& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        total += s.weight(i) *
                 sq_euclid(s.scenario(i).features, p.representatives[p.assignment[i]].features);
    return total;
}

Partition kmeans(const ScenarioSet& s, int k, std::uint64_t seed, int max_iter, double tol) {
    const int n = static_cast<int>(s.size());
    if (k < 1 || k > n) fail("BadK", "k must lie in 1..N");

    Rng rng(seed);
    // k-means++ seeding: first center weight-proportional, then D^2 sampling.
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    {
        std::vector<double> pick(s.weights());
        centers.push_back(s.scenario(rng.weighted_index(pick)).features);
        std::vector<double> d2(n);
        while (static_cast<int>(centers.size()) < k) {
            for (int i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& c : centers) best = std::min(best, sq_euclid(s.scenario(i).features, c));
                d2[i] = s.weight(i) * best;
            }
            centers.push_back(s.scenario(rng.weighted_index(d2)).features);
        }
    }

    std::vector<int> assignment(n, 0);
    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iter; ++iter) {
        // Assignment step, ties to the lowest center index.
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int bestc = 0;
            for (int c = 0; c < k; ++c) {
                const double d = sq_euclid(s.scenario(i).features, centers[c]);
                if (d < best) {
                    best = d;
                    bestc = c;
                }
            }
            assignment[i] = bestc;
        }

        // Empty-cluster repair: reseed at the point farthest from its center.
        for (int repair = 0; repair <= k; ++repair) {
            std::vector<int> counts(k, 0);
            for (int a : assignment) ++counts[a];
            int empty = -1;
            for (int c = 0; c < k; ++c)
                if (counts[c] == 0) {
                    empty = c;
                    break;
                }
            if (empty < 0) break;
            if (repair == k) fail("EmptyCluster", "empty-cluster repair did not converge");
            double worst = -1.0;
            int worst_i = 0;
            for (int i = 0; i < n; ++i) {
                const double d = sq_euclid(s.scenario(i).features, centers[assignment[i]]);
                if (d > worst && counts[assignment[i]] > 1) {
                    worst = d;
                    worst_i = i;
                }
            }
            centers[empty] = s.scenario(worst_i).features;
            assignment[worst_i] = empty;
        }

        // Update step: weighted means.
        double shift = 0.0;
        std::vector<std::vector<int>> members(k);
        for (int i = 0; i < n; ++i) members[assignment[i]].push_back(i);
        for (int c = 0; c < k; ++c) {
            auto mean = weighted_mean(s, members[c]);
            shift = std::max(shift, std::sqrt(sq_euclid(mean, centers[c])));
            centers[c] = std::move(mean);
        }

        double inertia = 0.0;
        for (int i = 0; i < n; ++i)
            inertia += s.weight(i) * sq_euclid(s.scenario(i).features, centers[assignment[i]]);
        if (inertia > prev_inertia * (1.0 + 1e-9) + 1e-12)
            fail("InertiaIncrease", "weighted inertia increased during Lloyd iteration");
        prev_inertia = inertia;
        if (shift < tol) break;
    }

    Partition p = make_partition(s, assignment);
    p.source_fingerprint = s.fingerprint();
    return p;
}

Partition kmedoids(const ScenarioSet& s, int k, const DistanceSpec& spec, std::uint64_t seed) {
    (void)seed;  // PAM BUILD+SWAP is deterministic
    const int n = static_cast<int>(s.size());
    if (k < 1 || k > n) fail("BadK", "k must lie in 1..N");
    const Matrix d = distance_matrix(s, spec);

    auto total_cost = [&](const std::vector<int>& medoids) {
        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int m : medoids) best = std::min(best, d(i, m));
            cost += s.weight(i) * best;
        }
        return cost;
    };

    // BUILD: start from the weighted 1-medoid, then greedy additions.
    std::vector<int> medoids;
    {
        double best = std::numeric_limits<double>::infinity();
        int bestm = 0;
        for (int m = 0; m < n; ++m) {
            double cost = 0.0;
            for (int i = 0; i < n; ++i) cost += s.weight(i) * d(i, m);
            if (cost < best - 1e-15) {
                best = cost;
                bestm = m;
            }
        }
        medoids.push_back(bestm);
        std::vector<double> nearest(n);
        while (static_cast<int>(medoids.size()) < k) {
            for (int i = 0; i < n; ++i) {
                double bestd = std::numeric_limits<double>::infinity();
                for (int m : medoids) bestd = std::min(bestd, d(i, m));
                nearest[i] = bestd;
            }
            double bestgain = -std::numeric_limits<double>::infinity();
            int bestc = -1;
            for (int c = 0; c < n; ++c) {
                if (std::find(medoids.begin(), medoids.end(), c) != medoids.end()) continue;
                double gain = 0.0;
                for (int i = 0; i < n; ++i)
                    gain += s.weight(i) * std::max(0.0, nearest[i] - d(i, c));
                if (gain > bestgain + 1e-15) {
                    bestgain = gain;
                    bestc = c;
                }
            }
            medoids.push_back(bestc);
        }
    }

    // SWAP until no improving exchange remains; ties keep the lowest pair.
    double cost = total_cost(medoids);
    for (;;) {
        double best_delta = -1e-9;
        int best_m = -1, best_h = -1;
        for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
            for (int h = 0; h < n; ++h) {
                if (std::find(medoids.begin(), medoids.end(), h) != medoids.end()) continue;
                std::vector<int> trial = medoids;
                trial[mi] = h;
                const double delta = total_cost(trial) - cost;
                if (delta < best_delta) {
                    best_delta = delta;
                    best_m = static_cast<int>(mi);
                    best_h = h;
                }
            }
        }
        if (best_m < 0) break;
        medoids[best_m] = best_h;
        cost += best_delta;
    }
    std::sort(medoids.begin(), medoids.end());

    std::vector<int> assignment(n, 0);
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int bestc = 0;
        for (std::size_t c = 0; c < medoids.size(); ++c) {
            if (d(i, medoids[c]) < best) {
                best = d(i, medoids[c]);
                bestc = static_cast<int>(c);
            }
        }
        assignment[i] = bestc;
    }
    // Medoids must stay in their own clusters even under distance ties.
    for (std::size_t c = 0; c < medoids.size(); ++c) assignment[medoids[c]] = static_cast<int>(c);

    Partition p = make_partition(s, assignment);
    // make_partition compacts by smallest member id; medoid order follows.
    std::vector<Scenario> reps(p.k());
    for (int m : medoids) reps[p.assignment[m]] = s.scenario(m);
    p.representatives = std::move(reps);
    p.rep_kind = RepKind::medoid;
    return p;
}

namespace {

struct ActiveCluster {
    int label = 0;        // dendrogram label
    int lo = 0, hi = 0;   // contiguous id range (ctpc)
    std::vector<int> members;
};

std::vector<double> feature_mean(const std::vector<std::vector<double>>& features,
                                 const std::vector<double>& weights,
                                 const std::vector<int>& members) {
    std::vector<double> mean(features.front().size(), 0.0);
    double wsum = 0.0;
    for (int i : members) {
        wsum += weights[i];
        for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += weights[i] * features[i][d];
    }
    for (double& v : mean) v /= wsum;
    return mean;
}

double linkage_value(const Matrix& d, const std::vector<double>& weights,
                     const std::vector<std::vector<double>>* features, LinkageKind linkage,
                     const ActiveCluster& x, const ActiveCluster& y) {
    switch (linkage) {
        case LinkageKind::single: {
            double best = std::numeric_limits<double>::infinity();
            for (int a : x.members)
                for (int b : y.members) best = std::min(best, d(a, b));
            return best;
        }
        case LinkageKind::complete: {
            double worst = 0.0;
            for (int a : x.members)
                for (int b : y.members) worst = std::max(worst, d(a, b));
            return worst;
        }
        case LinkageKind::average: {
            double sum = 0.0, wx = 0.0, wy = 0.0;
            for (int a : x.members) wx += weights[a];
            for (int b : y.members) wy += weights[b];
            for (int a : x.members)
                for (int b : y.members) sum += weights[a] * weights[b] * d(a, b);
            return sum / (wx * wy);
        }
        case LinkageKind::minmax: {
            // min over candidate centers in the union of the max distance
            // to the union
            std::vector<int> all = x.members;
            all.insert(all.end(), y.members.begin(), y.members.end());
            double best = std::numeric_limits<double>::infinity();
            for (int c : all) {
                double worst = 0.0;
                for (int o : all) worst = std::max(worst, d(c, o));
                best = std::min(best, worst);
            }
            return best;
        }
        case LinkageKind::ward: {
            const auto cx = feature_mean(*features, weights, x.members);
            const auto cy = feature_mean(*features, weights, y.members);
            double wx = 0.0, wy = 0.0;
            for (int a : x.members) wx += weights[a];
            for (int b : y.members) wy += weights[b];
            return wx * wy / (wx + wy) * sq_euclid(cx, cy);
        }
        case LinkageKind::centroid_link: {
            const auto cx = feature_mean(*features, weights, x.members);
            const auto cy = feature_mean(*features, weights, y.members);
            return sq_euclid(cx, cy);
        }
    }
    fail("BadSpec", "unknown linkage");
}

}  // namespace

MatrixHacResult hac_matrix(const Matrix& d, const std::vector<double>& weights, int k,
                           LinkageKind linkage, bool chronological,
                           const std::vector<std::vector<double>>* features) {
    const int n = static_cast<int>(d.rows());
    if (k < 1 || k > n) fail("BadK", "k must lie in 1..N");
    if ((linkage == LinkageKind::ward || linkage == LinkageKind::centroid_link) &&
        (features == nullptr || features->empty()))
        fail("BadSpec", "ward/centroid linkage needs feature vectors");

    std::vector<ActiveCluster> active(n);
    for (int i = 0; i < n; ++i) active[i] = ActiveCluster{i, i, i, {i}};

    MatrixHacResult result;
    result.assignment.assign(n, 0);
    bool cut_taken = false;
    auto record_cut = [&]() {
        for (std::size_t c = 0; c < active.size(); ++c)
            for (int m : active[c].members) result.assignment[m] = static_cast<int>(c);
        cut_taken = true;
    };
    if (static_cast<int>(active.size()) == k) record_cut();

    int next_label = n;
    while (active.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                if (chronological) {
                    const bool adjacent = active[i].hi + 1 == active[j].lo ||
                                          active[j].hi + 1 == active[i].lo;
                    if (!adjacent) continue;  // linkage is +infinity
                }
                const double v = linkage_value(d, weights, features, linkage, active[i], active[j]);
                // Tie-break on the smallest (label_a, label_b) pair.
                if (v < best - 1e-15) {
                    best = v;
                    bi = static_cast<int>(i);
                    bj = static_cast<int>(j);
                } else if (std::abs(v - best) <= 1e-15 && bi >= 0) {
                    const int la = std::min(active[i].label, active[j].label);
                    const int lb = std::max(active[i].label, active[j].label);
                    const int ca = std::min(active[bi].label, active[bj].label);
                    const int cb = std::max(active[bi].label, active[bj].label);
                    if (la < ca || (la == ca && lb < cb)) {
                        best = v;
                        bi = static_cast<int>(i);
                        bj = static_cast<int>(j);
                    }
                }
            }
        }
        if (bi < 0) fail("BadK", "no mergeable cluster pair remains");

        ActiveCluster merged;
        merged.label = next_label++;
        merged.lo = std::min(active[bi].lo, active[bj].lo);
        merged.hi = std::max(active[bi].hi, active[bj].hi);
        merged.members = active[bi].members;
        merged.members.insert(merged.members.end(), active[bj].members.begin(),
                              active[bj].members.end());
        std::sort(merged.members.begin(), merged.members.end());
        result.dendrogram.merges.push_back({std::min(active[bi].label, active[bj].label),
                                            std::max(active[bi].label, active[bj].label), best,
                                            static_cast<int>(merged.members.size())});

        active.erase(active.begin() + std::max(bi, bj));
        active.erase(active.begin() + std::min(bi, bj));
        active.push_back(std::move(merged));

        if (static_cast<int>(active.size()) == k) record_cut();
    }
    if (!cut_taken) record_cut();
    return result;
}

namespace {

std::pair<Partition, Dendrogram> agglomerate(const ScenarioSet& s, int k, LinkageKind linkage,
                                             const DistanceSpec& spec, bool chronological) {
    if (linkage == LinkageKind::ward && !spec.is_euclidean())
        fail("BadSpec", "ward linkage requires the Euclidean distance");
    const Matrix d = distance_matrix(s, spec);
    std::vector<std::vector<double>> features;
    features.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) features.push_back(s.scenario(i).features);
    MatrixHacResult r = hac_matrix(d, s.weights(), k, linkage, chronological, &features);
    Partition p = make_partition(s, r.assignment);
    return {std::move(p), std::move(r.dendrogram)};
}

}  // namespace

std::pair<Partition, Dendrogram> hac(const ScenarioSet& s, int k, LinkageKind linkage,
                                     const DistanceSpec& spec) {
    return agglomerate(s, k, linkage, spec, false);
}

std::pair<Partition, Dendrogram> ctpc(const ScenarioSet& s, int k, LinkageKind linkage,
                                      const DistanceSpec& spec) {
    return agglomerate(s, k, linkage, spec, true);
}

std::vector<int> representative_ids(const Partition& p, const ScenarioSet& source,
                                    RepresentativeKind kind, const DistanceSpec& spec) {
    validate_partition(p, source);
    if (kind == RepresentativeKind::centroid)
        fail("BadSpec", "centroid representatives are not members");
    const auto members = disaggregate(p, source);
    std::vector<int> ids(p.k());
    for (int c = 0; c < p.k(); ++c) {
        double best = std::numeric_limits<double>::infinity();
        int bestm = members[c].front();
        if (kind == RepresentativeKind::medoid) {
            for (int m : members[c]) {
                double cost = 0.0;
                for (int o : members[c]) {
                    if (o == m) continue;
                    cost += source.weight(o) * distance(spec, source.scenario(m).features,
                                                        source.scenario(o).features);
                }
                if (cost < best - 1e-15) {
                    best = cost;
                    bestm = m;
                }
            }
        } else {
            const auto mean = weighted_mean(source, members[c]);
            for (int m : members[c]) {
                const double d = sq_euclid(source.scenario(m).features, mean);
                if (d < best - 1e-15) {
                    best = d;
                    bestm = m;
                }
            }
        }
        ids[c] = bestm;
    }
    return ids;
}

Partition representative(const Partition& p, const ScenarioSet& source, RepresentativeKind kind,
                         const DistanceSpec& spec) {
    validate_partition(p, source);
    Partition out = p;
    if (kind == RepresentativeKind::centroid) {
        const auto members = disaggregate(p, source);
        for (int c = 0; c < p.k(); ++c)
            out.representatives[c] = make_rep(source, weighted_mean(source, members[c]), c);
        out.rep_kind = RepKind::centroid;
        return out;
    }
    const std::vector<int> ids = representative_ids(p, source, kind, spec);
    for (int c = 0; c < p.k(); ++c) out.representatives[c] = source.scenario(ids[c]);
    out.rep_kind = RepKind::medoid;
    return out;
}

}  // namespace scenagg
