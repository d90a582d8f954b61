#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenagg/distance.hpp"
#include "scenagg/scenario.hpp"

namespace scenagg {

enum class LinkageKind { ward, minmax, complete, single, average, centroid_link };

LinkageKind linkage_from_string(const std::string& name);
std::string to_string(LinkageKind linkage);

/// Agglomeration history: one entry per merge. Cluster labels follow the
/// usual convention: leaves are 0..N-1, the cluster created by merge i is
/// labeled N+i.
struct DendrogramMerge {
    int a = 0;
    int b = 0;
    double height = 0.0;
    int new_size = 0;
};

struct Dendrogram {
    std::vector<DendrogramMerge> merges;
};

enum class RepresentativeKind { centroid, medoid, closest_to_centroid };

RepresentativeKind representative_kind_from_string(const std::string& name);

/// Lloyd's algorithm with k-means++ seeding on weighted scenarios.
/// Weighted inertia is checked to be nonincreasing across iterations.
/// Representatives are weighted cluster means.
Partition kmeans(const ScenarioSet& s, int k, std::uint64_t seed, int max_iter = 100,
                 double tol = 1e-9);

/// PAM (BUILD + SWAP) over a precomputed distance matrix under any
/// DistanceSpec. Medoids are members of their clusters; ties resolve to
/// the lowest scenario id. The seed is accepted for interface symmetry;
/// PAM itself is deterministic.
Partition kmedoids(const ScenarioSet& s, int k, const DistanceSpec& spec, std::uint64_t seed);

/// Hierarchical agglomerative clustering with the linkage evaluated by
/// direct recomputation over cluster members. Ties break on the smallest
/// (a, b) pair of cluster labels. Ward and centroid linkages require
/// Euclidean geometry; ward rejects non-Euclidean specs.
std::pair<Partition, Dendrogram> hac(const ScenarioSet& s, int k, LinkageKind linkage,
                                     const DistanceSpec& spec);

/// Chronological time-period clustering: HAC where only clusters adjacent
/// in scenario-id order may merge, so every cluster is a contiguous block
/// of the chronology.
std::pair<Partition, Dendrogram> ctpc(const ScenarioSet& s, int k, LinkageKind linkage,
                                      const DistanceSpec& spec = DistanceSpec::euclidean());

/// Recomputes representatives of an existing partition (centroid, medoid,
/// or member closest to the centroid) using scenario weights.
Partition representative(const Partition& p, const ScenarioSet& source, RepresentativeKind kind,
                         const DistanceSpec& spec = DistanceSpec::euclidean());

/// Member scenario ids chosen as medoid / closest-to-centroid per cluster
/// (ties to the lowest id). Useful when selection happens in a normalized
/// space but the representative must come from the raw space.
std::vector<int> representative_ids(const Partition& p, const ScenarioSet& source,
                                    RepresentativeKind kind,
                                    const DistanceSpec& spec = DistanceSpec::euclidean());

/// Builds a Partition from a raw assignment: cluster indices are compacted
/// in order of each cluster's smallest scenario id, cluster weights are
/// summed member weights, and representatives are weighted centroids.
Partition make_partition(const ScenarioSet& source, const std::vector<int>& assignment);

struct MatrixHacResult {
    std::vector<int> assignment;
    Dendrogram dendrogram;
};

/// Agglomeration core over a precomputed symmetric dissimilarity matrix.
/// ward and centroid linkages need feature vectors; pass them or get
/// BadSpec. chronological restricts merges to index-adjacent blocks.
MatrixHacResult hac_matrix(const Matrix& d, const std::vector<double>& weights, int k,
                           LinkageKind linkage, bool chronological = false,
                           const std::vector<std::vector<double>>* features = nullptr);

/// Weighted within-cluster sum of squared Euclidean distances to the
/// representatives (Eq-5-style objective).
double weighted_inertia(const ScenarioSet& s, const Partition& p);

}  // namespace scenagg
