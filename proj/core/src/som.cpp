#include "scenagg/som.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scenagg/cluster.hpp"
#include "scenagg/rng.hpp"

namespace scenagg {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

SomGrid som_train(const ScenarioSet& s, int rows, int cols, const SomOptions& opts,
                  std::uint64_t seed) {
    if (rows < 1 || cols < 1) fail("BadGrid", "grid must have at least one node");
    if (opts.epochs < 1) fail("BadSchedule", "epochs must be >= 1");
    if (!(opts.lr0 > 0.0 && opts.lr0 <= 1.0)) fail("BadSchedule", "lr0 must lie in (0, 1]");
    const double radius0 = opts.radius0 < 0.0 ? std::max(rows, cols) / 2.0 : opts.radius0;

    const std::size_t dim = s.scenario(0).dim();
    Rng rng(seed);

    // Per-dimension data range for uniform weight initialization.
    std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& f = s.scenario(i).features;
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], f[d]);
            hi[d] = std::max(hi[d], f[d]);
        }
    }

    SomGrid g;
    g.rows = rows;
    g.cols = cols;
    g.weights.resize(static_cast<std::size_t>(rows) * cols);
    for (auto& w : g.weights) {
        w.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) w[d] = rng.uniform(lo[d], hi[d]);
    }

    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);

    const int T = opts.epochs;
    for (int epoch = 0; epoch < T; ++epoch) {
        // Exponential decay from the initial value to the floor at t = T-1.
        const double frac = T == 1 ? 0.0 : static_cast<double>(epoch) / (T - 1);
        const double lr = opts.lr0 * std::pow(opts.lr_floor / opts.lr0, frac);
        const double sigma =
            radius0 <= 0.0 ? 0.0 : radius0 * std::pow(opts.radius_floor / radius0, frac);

        rng.shuffle(order);
        for (std::size_t oi : order) {
            const auto& x = s.scenario(oi).features;
            const int v = som_bmu(g, x);
            const int vr = v / cols, vc = v % cols;
            for (int node = 0; node < g.nodes(); ++node) {
                double theta;
                if (node == v) {
                    theta = 1.0;
                } else if (sigma <= 0.0) {
                    continue;  // radius 0: only the BMU moves
                } else {
                    const int nr = node / cols, nc = node % cols;
                    const double gd2 = static_cast<double>((nr - vr) * (nr - vr) +
                                                           (nc - vc) * (nc - vc));
                    theta = std::exp(-gd2 / (2.0 * sigma * sigma));
                    if (theta < 1e-12) continue;
                }
                auto& w = g.weights[node];
                const double step = theta * lr;
                for (std::size_t d = 0; d < dim; ++d) w[d] += step * (x[d] - w[d]);
            }
        }
    }
    g.epochs_trained = T;
    return g;
}

int som_bmu(const SomGrid& g, std::span<const double> x) {
    if (g.weights.empty()) fail("BadGrid", "grid is empty");
    if (x.size() != g.weights.front().size())
        fail("DimensionMismatch", "sample dimension does not match node weights");
    int best = 0;
    double bestd = sq_dist(g.weights[0], x);
    for (int i = 1; i < g.nodes(); ++i) {
        const double d = sq_dist(g.weights[i], x);
        if (d < bestd) {  // strict: ties keep the lowest index
            bestd = d;
            best = i;
        }
    }
    return best;
}

Partition som_partition(const SomGrid& g, const ScenarioSet& s) {
    std::vector<int> assignment(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        assignment[i] = som_bmu(g, s.scenario(i).features);
    // make_partition drops empty nodes and compacts indices; weighted
    // member means replace the node weights.
    return make_partition(s, assignment);
}

}  // namespace scenagg
