#include "scenagg/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace scenagg {

CostKind cost_kind_from_string(const std::string& name) {
    if (name == "dupacova") return CostKind::dupacova;
    if (name == "morales") return CostKind::morales;
    if (name == "bruninx") return CostKind::bruninx;
    fail("BadSpec", "unknown cost kind '" + name + "'");
}

std::string to_string(CostKind kind) {
    switch (kind) {
        case CostKind::dupacova: return "dupacova";
        case CostKind::morales: return "morales";
        case CostKind::bruninx: return "bruninx";
    }
    return "unknown";
}

CostMatrix cost_matrix(const ScenarioSet& s, CostKind kind,
                       const std::optional<std::vector<double>>& context) {
    const std::size_t n = s.size();
    CostMatrix out;
    out.kind = kind;
    if (kind == CostKind::dupacova) {
        out.c = distance_matrix(s, DistanceSpec::euclidean());
        return out;
    }
    if (!context)
        fail("MissingContext", to_string(kind) + " cost requires per-scenario objective values");
    if (context->size() != n)
        fail("MissingContext", "context value count does not match scenario count");
    out.context = *context;
    out.c = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.c(i, j) = out.c(j, i) = std::abs((*context)[i] - (*context)[j]);
    return out;
}

double kantorovich(const ScenarioSet& full, const std::set<int>& kept, const CostMatrix& c) {
    if (kept.empty()) fail("EmptyKeptSet", "kept set must be nonempty");
    double total = 0.0;
    for (std::size_t w = 0; w < full.size(); ++w) {
        if (kept.count(static_cast<int>(w))) continue;
        double best = std::numeric_limits<double>::infinity();
        for (int r : kept) best = std::min(best, c.c(w, r));
        total += full.probability(w) * best;
    }
    return total;
}

std::vector<double> redistribute_weights(const ScenarioSet& s, const std::vector<int>& kept,
                                         const Matrix& cost) {
    std::vector<double> weights(kept.size(), 0.0);
    for (std::size_t k = 0; k < kept.size(); ++k) weights[k] = s.weight(kept[k]);
    for (std::size_t w = 0; w < s.size(); ++w) {
        if (std::find(kept.begin(), kept.end(), static_cast<int>(w)) != kept.end()) continue;
        std::size_t bestk = 0;
        double best = cost(w, kept[0]);
        for (std::size_t k = 1; k < kept.size(); ++k) {
            const double d = cost(w, kept[k]);
            const bool better = d < best - 1e-15;
            const bool tie_lower = std::abs(d - best) <= 1e-15 && kept[k] < kept[bestk];
            if (better || tie_lower) {
                best = d;
                bestk = k;
            }
        }
        weights[bestk] += s.weight(w);
    }
    return weights;
}

namespace {

ReducedSet build_reduced(const ScenarioSet& s, std::vector<int> kept,
                         const Matrix& cost, std::string method, std::string params) {
    std::sort(kept.begin(), kept.end());
    const std::vector<double> weights = redistribute_weights(s, kept, cost);
    std::vector<Scenario> scenarios;
    scenarios.reserve(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        Scenario sc = s.scenario(kept[k]);
        sc.id = kept[k];  // keep the source id for provenance
        scenarios.push_back(std::move(sc));
    }
    Provenance prov;
    prov.method = std::move(method);
    prov.params = std::move(params);
    prov.source_fingerprint = s.fingerprint();
    return ReducedSet{ScenarioSet(std::move(scenarios), weights, s.channel_labels()),
                      std::move(prov)};
}

}  // namespace

ReducedSet forward_selection(const ScenarioSet& s, int n_keep, const CostMatrix& c) {
    const int n = static_cast<int>(s.size());
    if (n_keep < 1 || n_keep > n) fail("BadN", "n_keep must lie in 1..N");

    std::vector<bool> kept_mask(n, false);
    std::vector<int> kept;
    // min_cost[w]: cost from w to the nearest kept scenario so far.
    std::vector<double> min_cost(n, std::numeric_limits<double>::infinity());

    for (int step = 0; step < n_keep; ++step) {
        double best = std::numeric_limits<double>::infinity();
        int best_r = -1;
        for (int r = 0; r < n; ++r) {
            if (kept_mask[r]) continue;
            double obj = 0.0;
            for (int w = 0; w < n; ++w) {
                if (kept_mask[w] || w == r) continue;
                obj += s.probability(w) * std::min(min_cost[w], c.c(w, r));
            }
            if (obj < best - 1e-15) {
                best = obj;
                best_r = r;
            }
        }
        kept_mask[best_r] = true;
        kept.push_back(best_r);
        for (int w = 0; w < n; ++w) min_cost[w] = std::min(min_cost[w], c.c(w, best_r));
    }

    std::ostringstream params;
    params << "cost=" << to_string(c.kind) << ",n_keep=" << n_keep;
    return build_reduced(s, std::move(kept), c.c, "fsa-" + to_string(c.kind), params.str());
}

ReducedSet mda(const ScenarioSet& s, int n_keep, const DistanceSpec& spec) {
    const int n = static_cast<int>(s.size());
    if (n_keep < 1 || n_keep > n) fail("BadN", "n_keep must lie in 1..N");

    // Identify load channels by label prefix.
    std::vector<int> load_channels;
    const auto& labels = s.channel_labels();
    for (std::size_t c = 0; c < labels.size(); ++c)
        if (labels[c].rfind("load", 0) == 0) load_channels.push_back(static_cast<int>(c));
    if (load_channels.empty())
        fail("NoLoadChannel", "MDA needs at least one channel labeled load*");

    // Seed with the peak daily load scenario.
    int seed_id = 0;
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double total = 0.0;
        for (int c : load_channels)
            for (int t = 0; t < s.hours(); ++t) total += s.scenario(i).value(t, c);
        if (total > peak + 1e-15) {
            peak = total;
            seed_id = i;
        }
    }

    const Matrix d = distance_matrix(s, spec);
    std::vector<bool> selected(n, false);
    std::vector<int> kept{seed_id};
    selected[seed_id] = true;
    std::vector<double> min_dist(n);
    for (int i = 0; i < n; ++i) min_dist[i] = d(i, seed_id);

    while (static_cast<int>(kept.size()) < n_keep) {
        double best = -std::numeric_limits<double>::infinity();
        int best_i = -1;
        for (int i = 0; i < n; ++i) {
            if (selected[i]) continue;
            if (min_dist[i] > best + 1e-15) {
                best = min_dist[i];
                best_i = i;
            }
        }
        selected[best_i] = true;
        kept.push_back(best_i);
        for (int i = 0; i < n; ++i) min_dist[i] = std::min(min_dist[i], d(i, best_i));
    }

    std::ostringstream params;
    params << "distance=" << spec.describe() << ",n_keep=" << n_keep;
    return build_reduced(s, std::move(kept), d, "mda", params.str());
}

}  // namespace scenagg
