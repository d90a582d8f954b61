#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scenagg/distance.hpp"
#include "scenagg/matrix.hpp"
#include "scenagg/scenario.hpp"

namespace scenagg {

enum class CostKind { dupacova, morales, bruninx };

CostKind cost_kind_from_string(const std::string& name);
std::string to_string(CostKind kind);

/// Pairwise scenario cost c(w, w') used by the Kantorovich distance and
/// forward selection. dupacova compares feature vectors directly; the
/// morales/bruninx variants compare injected per-scenario objective values.
struct CostMatrix {
    Matrix c;
    CostKind kind = CostKind::dupacova;
    std::vector<double> context;  // z^DP or z^SS values when kind != dupacova
};

/// Builds the cost matrix. morales/bruninx require one context value per
/// scenario (objective values produced elsewhere); dupacova uses the
/// Euclidean norm of feature differences.
CostMatrix cost_matrix(const ScenarioSet& s, CostKind kind,
                       const std::optional<std::vector<double>>& context = {});

/// Kantorovich distance between the full set and the subset retained in
/// `kept`: sum over deleted scenarios of probability times the cost to the
/// nearest kept scenario.
double kantorovich(const ScenarioSet& full, const std::set<int>& kept, const CostMatrix& c);

/// Forward selection: greedily grows the kept set by the scenario whose
/// addition minimizes the Kantorovich objective (ties to the lowest id),
/// then redistributes each deleted scenario's weight to its nearest kept
/// scenario. Total weight is conserved.
ReducedSet forward_selection(const ScenarioSet& s, int n_keep, const CostMatrix& c);

/// Maximum dissimilarity algorithm: starts from the peak-load scenario
/// (largest total over load channels) and repeatedly adds the scenario
/// with the largest minimum distance to the selected set. Weights are
/// redistributed to the nearest selected scenario. Load channels are the
/// ones whose label starts with "load".
ReducedSet mda(const ScenarioSet& s, int n_keep, const DistanceSpec& spec);

/// Nearest-kept weight redistribution shared by FSA and MDA: each deleted
/// scenario's weight is added to its closest kept scenario under the given
/// pairwise costs (ties to the lowest kept id). Returns per-kept-id weights.
std::vector<double> redistribute_weights(const ScenarioSet& s, const std::vector<int>& kept,
                                         const Matrix& cost);

}  // namespace scenagg
