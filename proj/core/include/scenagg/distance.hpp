#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>

#include "scenagg/matrix.hpp"
#include "scenagg/scenario.hpp"

namespace scenagg {

/// Similarity measure selector for scenario feature vectors.
struct DistanceSpec {
    enum class Kind { minkowski, dtw, mjc, sbd };

    Kind kind = Kind::minkowski;
    double p = 2.0;                 // Minkowski order, >= 1 or infinity
    std::optional<int> window;      // DTW band half-width; unset = unconstrained
    std::optional<double> phi;      // MJC timing penalty; unset = 4*sigma/n default

    static DistanceSpec minkowski(double p) { return {Kind::minkowski, p, {}, {}}; }
    static DistanceSpec euclidean() { return minkowski(2.0); }
    static DistanceSpec chebyshev() { return minkowski(std::numeric_limits<double>::infinity()); }
    static DistanceSpec dtw(std::optional<int> window = {}) { return {Kind::dtw, 2.0, window, {}}; }
    static DistanceSpec mjc(std::optional<double> phi = {}) { return {Kind::mjc, 2.0, {}, phi}; }
    static DistanceSpec sbd() { return {Kind::sbd, 2.0, {}, {}}; }

    bool is_euclidean() const { return kind == Kind::minkowski && p == 2.0; }
    void validate() const;
    std::string describe() const;  // stable string for provenance
};

DistanceSpec distance_spec_from_string(const std::string& name);

/// Minkowski distance of order p (p = inf gives the Chebyshev metric).
double minkowski_distance(std::span<const double> x, std::span<const double> y, double p);

/// Dynamic time warping with squared-difference step costs; returns the
/// square root of the optimal warping-path sum. window, when set, is a
/// Sakoe-Chiba band: |i - j| <= window, which must cover the length gap.
double dtw_distance(std::span<const double> x, std::span<const double> y,
                    std::optional<int> window = {});

/// Minimum jump cost, symmetrized as the smaller of the two directed
/// costs. phi penalizes jumping forward in time; when unset it defaults to
/// 4*sigma/n over the pooled samples.
double mjc_distance(std::span<const double> x, std::span<const double> y,
                    std::optional<double> phi = {});

/// Shape-based distance: 1 - max normalized cross-correlation over all
/// zero-padded shifts. Lies in [0, 2]; 0 for positively scaled copies.
double sbd_distance(std::span<const double> x, std::span<const double> y);

/// Dispatches on the spec.
double distance(const DistanceSpec& spec, std::span<const double> x, std::span<const double> y);

/// Symmetric pairwise distance matrix with zero diagonal. Rows may be
/// computed in parallel; entries are identical to the sequential order.
Matrix distance_matrix(const ScenarioSet& s, const DistanceSpec& spec, int workers = 1);

}  // namespace scenagg
