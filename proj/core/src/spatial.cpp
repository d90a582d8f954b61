#include "scenagg/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace scenagg {

SimilarityKind similarity_kind_from_string(const std::string& name) {
    if (name == "topology") return SimilarityKind::topology;
    if (name == "admittance") return SimilarityKind::admittance;
    if (name == "avg_power_flow") return SimilarityKind::avg_power_flow;
    if (name == "timeseries") return SimilarityKind::timeseries;
    fail("BadSpec", "unknown similarity kind '" + name + "'");
}

void SimilarityMatrix::validate() const {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n) fail("BadSpec", "similarity matrix must be square");
    for (std::size_t i = 0; i < n; ++i) {
        if (a(i, i) != 0.0) fail("BadSpec", "similarity diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (a(i, j) < 0.0) fail("BadSpec", "similarity entries must be nonnegative");
            if (std::abs(a(i, j) - a(j, i)) > 1e-12)
                fail("BadSpec", "similarity matrix must be symmetric");
        }
    }
}

SimilarityMatrix similarity(const Network& net, SimilarityKind kind,
                            const std::optional<std::vector<std::pair<double, double>>>&
                                line_flows) {
    net.validate();
    if (kind == SimilarityKind::timeseries)
        fail("BadSpec", "use similarity_timeseries for profile-based similarity");
    if (kind == SimilarityKind::avg_power_flow) {
        if (!line_flows) fail("MissingFlows", "avg_power_flow similarity needs per-line flows");
        if (line_flows->size() != net.lines.size())
            fail("MissingFlows", "flow count does not match line count");
    }

    const std::size_t n = net.buses.size();
    SimilarityMatrix out;
    out.kind = kind;
    out.a = Matrix(n, n, 0.0);
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        const Line& line = net.lines[l];
        if (!line.existing) continue;  // the grid graph is the built network
        double v = 0.0;
        switch (kind) {
            case SimilarityKind::topology: v = 1.0; break;
            case SimilarityKind::admittance: v = std::abs(line.susceptance); break;
            case SimilarityKind::avg_power_flow:
                v = 0.5 * (std::abs((*line_flows)[l].first) + std::abs((*line_flows)[l].second));
                break;
            case SimilarityKind::timeseries: break;
        }
        if (kind == SimilarityKind::topology) {
            out.a(line.from, line.to) = 1.0;  // indicator, parallel lines do not stack
            out.a(line.to, line.from) = 1.0;
        } else {
            out.a(line.from, line.to) += v;
            out.a(line.to, line.from) += v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += out.a(i, j);
        if (row <= 0.0)
            fail("DisconnectedWeightless",
                 "node '" + net.buses[i].name + "' has an all-zero similarity row");
    }
    return out;
}

SimilarityMatrix similarity_timeseries(const std::vector<std::vector<double>>& node_profiles,
                                       const DistanceSpec& spec) {
    const std::size_t n = node_profiles.size();
    if (n == 0) fail("EmptyInput", "no node profiles");
    Matrix d(n, n, 0.0);
    std::vector<double> positive;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            d(i, j) = d(j, i) = distance(spec, node_profiles[i], node_profiles[j]);
            if (d(i, j) > 0.0) positive.push_back(d(i, j));
        }
    double sigma = 1.0;
    if (!positive.empty()) {
        std::sort(positive.begin(), positive.end());
        sigma = positive[positive.size() / 2];
    }
    SimilarityMatrix out;
    out.kind = SimilarityKind::timeseries;
    out.a = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out.a(i, j) = std::exp(-d(i, j) * d(i, j) / (2.0 * sigma * sigma));
    return out;
}

Laplacian laplacian(const SimilarityMatrix& a, bool normalized) {
    a.validate();
    const std::size_t n = a.nodes();
    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) degree[i] += a.a(i, j);

    Laplacian out;
    out.normalized = normalized;
    out.l = Matrix(n, n, 0.0);
    if (!normalized) {
        for (std::size_t i = 0; i < n; ++i) {
            out.l(i, i) = degree[i];
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) out.l(i, j) = -a.a(i, j);
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (degree[i] <= 0.0) fail("ZeroDegree", "normalized Laplacian needs positive degrees");
    for (std::size_t i = 0; i < n; ++i) {
        out.l(i, i) = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out.l(i, j) = -a.a(i, j) / std::sqrt(degree[i] * degree[j]);
    }
    return out;
}

std::pair<std::vector<double>, Matrix> symmetric_eigen(const Matrix& m, int max_sweeps) {
    const std::size_t n = m.rows();
    Matrix a = m;
    Matrix v(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
    const double tol = 1e-14 * std::max(1.0, std::sqrt(frob));

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
        if (std::sqrt(off) <= tol) {
            std::vector<double> evals(n);
            for (std::size_t i = 0; i < n; ++i) evals[i] = a(i, i);
            // Sort eigenvalues ascending, permute eigenvector columns along.
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t x, std::size_t y) { return evals[x] < evals[y]; });
            std::vector<double> sorted(n);
            Matrix vec(n, n, 0.0);
            for (std::size_t c = 0; c < n; ++c) {
                sorted[c] = evals[order[c]];
                // Deterministic sign: largest-magnitude entry positive.
                std::size_t arg = 0;
                double mag = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (std::abs(v(r, order[c])) > mag + 1e-15) {
                        mag = std::abs(v(r, order[c]));
                        arg = r;
                    }
                }
                const double sign = v(arg, order[c]) < 0.0 ? -1.0 : 1.0;
                for (std::size_t r = 0; r < n; ++r) vec(r, c) = sign * v(r, order[c]);
            }
            return {std::move(sorted), std::move(vec)};
        }

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= tol / (n * n)) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    fail("EigenNoConvergence", "Jacobi sweep cap exceeded");
}

Partition spectral_partition(const SimilarityMatrix& a, int k, const SpectralInner& inner,
                             std::uint64_t seed, bool normalized) {
    const int n = static_cast<int>(a.nodes());
    if (k < 1 || k > n) fail("BadK", "k must lie in 1..N");

    const Laplacian lap = laplacian(a, normalized);
    auto [evals, evecs] = symmetric_eigen(lap.l);

    // Rows of the k smallest eigenvectors are the node features.
    std::vector<std::vector<double>> features(n, std::vector<double>(k));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c) features[i][c] = evecs(i, c);

    std::vector<std::string> labels(k);
    for (int c = 0; c < k; ++c) labels[c] = "eig" + std::to_string(c);
    const ScenarioSet nodes = make_scenario_set(features, {}, labels);

    if (inner.kind == SpectralInner::Kind::kmeans) return kmeans(nodes, k, seed);
    return hac(nodes, k, inner.linkage, DistanceSpec::euclidean()).first;
}

Partition consensus_partition(const std::vector<Partition>& daily_partitions, int k,
                              LinkageKind linkage) {
    if (daily_partitions.empty()) fail("EmptyInput", "no daily partitions");
    const std::size_t n = daily_partitions.front().assignment.size();
    for (const Partition& p : daily_partitions)
        if (p.assignment.size() != n)
            fail("MismatchedSource", "daily partitions cover different node sets");

    Matrix m(n, n, 0.0);
    for (const Partition& p : daily_partitions)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (p.assignment[i] == p.assignment[j]) m(i, j) += 1.0;
    const double days = static_cast<double>(daily_partitions.size());
    for (auto& v : m.data()) v /= days;

    Matrix dissim(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dissim(i, j) = i == j ? 0.0 : 1.0 - m(i, j);

    std::vector<std::vector<double>> features(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) features[i][j] = m(i, j);

    const std::vector<double> weights(n, 1.0);
    MatrixHacResult r = hac_matrix(dissim, weights, k, linkage, false, &features);

    std::vector<std::string> labels(n);
    for (std::size_t c = 0; c < n; ++c) labels[c] = "node" + std::to_string(c);
    const ScenarioSet nodes = make_scenario_set(features, {}, labels);
    return make_partition(nodes, r.assignment);
}

}  // namespace scenagg
