#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scenagg/scenario.hpp"

namespace scenagg {

/// Rectangular self-organizing map. Node (r, c) has index r*cols + c;
/// grid distance is Euclidean over (r, c) coordinates.
struct SomGrid {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<double>> weights;  // one vector per node
    int epochs_trained = 0;

    int nodes() const { return rows * cols; }
};

struct SomOptions {
    int epochs = 50;
    double lr0 = 0.5;          // initial learning rate, (0, 1]
    double radius0 = -1.0;     // initial neighborhood radius; < 0 = max(rows, cols)/2
    double lr_floor = 1e-3;    // learning rate at the final epoch
    double radius_floor = 0.1; // radius at the final epoch
};

/// Trains a SOM on the scenario feature vectors: per sample, the best
/// matching unit and its Gaussian neighborhood move toward the sample;
/// learning rate and radius decay exponentially per epoch. Weight
/// initialization is uniform over the per-dimension data range; sample
/// order is reshuffled every epoch. Fully determined by the seed.
SomGrid som_train(const ScenarioSet& s, int rows, int cols, const SomOptions& opts,
                  std::uint64_t seed);

/// Index of the node with the smallest Euclidean distance to x; ties to
/// the lowest node index.
int som_bmu(const SomGrid& g, std::span<const double> x);

/// Assigns every scenario to its BMU, drops empty nodes, compacts cluster
/// indices, and replaces node weights by weighted member means so the
/// result behaves like a centroid partition.
Partition som_partition(const SomGrid& g, const ScenarioSet& s);

}  // namespace scenagg
