#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scenagg/cluster.hpp"
#include "scenagg/distance.hpp"
#include "scenagg/matrix.hpp"
#include "scenagg/network.hpp"

namespace scenagg {

enum class SimilarityKind { topology, admittance, avg_power_flow, timeseries };

SimilarityKind similarity_kind_from_string(const std::string& name);

/// Symmetric nonnegative node-similarity matrix with zero diagonal.
struct SimilarityMatrix {
    Matrix a;
    SimilarityKind kind = SimilarityKind::topology;

    std::size_t nodes() const { return a.rows(); }
    void validate() const;
};

/// Grid-graph similarity over existing lines. topology: 1 when connected;
/// admittance: susceptance magnitudes summed per corridor; avg_power_flow:
/// (|P_ij| + |P_ji|) / 2 from the supplied per-line directed flow
/// magnitudes. Throws DisconnectedWeightless when a node ends up with an
/// all-zero row.
SimilarityMatrix similarity(const Network& net, SimilarityKind kind,
                            const std::optional<std::vector<std::pair<double, double>>>&
                                line_flows = {});

/// Gaussian-kernel similarity from per-node profile rows: A_ij =
/// exp(-d_ij^2 / (2 sigma^2)) with sigma the median positive pairwise
/// distance under the given spec.
SimilarityMatrix similarity_timeseries(const std::vector<std::vector<double>>& node_profiles,
                                       const DistanceSpec& spec);

struct Laplacian {
    Matrix l;
    bool normalized = false;
};

/// L = D - A, or the symmetric normalized form I - D^{-1/2} A D^{-1/2}
/// (eigenvalues in [0, 2]). Normalization requires strictly positive
/// degrees.
Laplacian laplacian(const SimilarityMatrix& a, bool normalized);

/// Jacobi rotation eigensolver for symmetric matrices: eigenvalues
/// ascending, eigenvectors as matching columns with the largest-magnitude
/// entry forced positive. Throws EigenNoConvergence past the sweep cap.
std::pair<std::vector<double>, Matrix> symmetric_eigen(const Matrix& m, int max_sweeps = 64);

struct SpectralInner {
    enum class Kind { kmeans, hac };
    Kind kind = Kind::kmeans;
    LinkageKind linkage = LinkageKind::ward;  // used when kind == hac
};

/// Four-step spectral partition: Laplacian, k smallest eigenvectors, rows
/// as node features, inner clustering.
Partition spectral_partition(const SimilarityMatrix& a, int k, const SpectralInner& inner,
                             std::uint64_t seed, bool normalized = true);

/// Consensus of per-day node partitions: M_ij = fraction of days i and j
/// share a cluster; HAC over 1 - M with the given linkage, cut at k.
Partition consensus_partition(const std::vector<Partition>& daily_partitions, int k,
                              LinkageKind linkage);

}  // namespace scenagg
