#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

#include "scenagg/milp.hpp"

namespace scenagg {

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
    double bound = -kInf;
    std::int64_t id = 0;
    std::vector<std::pair<int, int>> fixings;  // (binary column, value)
    Basis basis;
    std::vector<double> x;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.id > b.id;                                // then creation order
    }
};

bool integral(const std::vector<double>& x, const std::vector<int>& binaries) {
    for (int j : binaries) {
        const double v = x[j];
        if (std::abs(v - std::round(v)) > kIntTol) return false;
    }
    return true;
}

int most_fractional(const std::vector<double>& x, const std::vector<int>& binaries) {
    int best = -1;
    double best_frac = kIntTol;
    for (int j : binaries) {
        const double v = x[j];
        const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
        if (frac > best_frac + 1e-12) {  // strict: ties keep the lowest index
            best_frac = frac;
            best = j;
        }
    }
    return best;
}

class Clock {
public:
    Clock() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

BnbResult branch_and_bound(const MilpInstance& m, const BnbOptions& opts) {
    m.validate();
    if (opts.rel_gap < 0.0) fail("BadSpec", "rel_gap must be nonnegative");
    const std::vector<int> binaries = m.binary_columns();
    const Clock clock;

    MilpInstance work = m;  // bounds are mutated per node and restored

    auto apply = [&](const std::vector<std::pair<int, int>>& fixings) {
        for (const auto& [j, v] : fixings) {
            work.variable(j).lower = v;
            work.variable(j).upper = v;
        }
    };
    auto restore = [&](const std::vector<std::pair<int, int>>& fixings) {
        for (const auto& [j, v] : fixings) {
            work.variable(j).lower = m.variable(j).lower;
            work.variable(j).upper = m.variable(j).upper;
        }
    };

    BnbResult out;
    double incumbent_obj = kInf;
    std::vector<double> incumbent_x;
    double global_bound = -kInf;
    std::int64_t explored = 0;
    std::int64_t next_id = 0;

    auto gap_of = [&](double bound) {
        if (!std::isfinite(incumbent_obj)) return kInf;
        return std::abs(incumbent_obj - bound) / std::max(std::abs(incumbent_obj), 1e-9);
    };
    auto record = [&]() {
        const double g = gap_of(global_bound);
        out.trajectory.push_back({clock.seconds(), explored, global_bound,
                                  std::isfinite(incumbent_obj) ? incumbent_obj : kInf,
                                  std::isfinite(g) ? g : kInf});
        if (opts.log)
            opts.log({explored, global_bound, std::isfinite(incumbent_obj) ? incumbent_obj : kInf,
                      std::isfinite(g) ? g : kInf, clock.seconds()});
    };

    auto try_incumbent = [&](double obj, const std::vector<double>& x) {
        if (obj < incumbent_obj - 1e-12 * std::max(1.0, std::abs(obj))) {
            incumbent_obj = obj;
            incumbent_x = x;
            for (int j : binaries) incumbent_x[j] = std::round(incumbent_x[j]);
            record();
            return true;
        }
        return false;
    };

    // Rounding heuristic: fix every binary to its nearest integer and
    // re-solve; any optimal outcome is a valid incumbent.
    auto heuristic = [&](const Node& node) {
        if (!opts.rounding_heuristic) return;
        std::vector<std::pair<int, int>> fixings = node.fixings;
        std::vector<bool> fixed(work.num_variables(), false);
        for (const auto& [j, v] : fixings) fixed[j] = true;
        for (int j : binaries)
            if (!fixed[j]) fixings.emplace_back(j, node.x[j] >= 0.5 ? 1 : 0);
        apply(fixings);
        LpOptions lp = opts.lp;
        lp.warm_start = node.basis;
        const LpResult r = solve_lp(work, lp);
        restore(fixings);
        if (r.status == LpStatus::optimal) try_incumbent(r.objective, r.x);
    };

    // Root relaxation.
    Node root;
    root.id = next_id++;
    {
        const LpResult r = solve_lp(work, opts.lp);
        if (r.status == LpStatus::infeasible) {
            out.status = BnbStatus::infeasible;
            out.nodes_explored = 1;
            return out;
        }
        if (r.status == LpStatus::unbounded) {
            out.status = BnbStatus::unbounded;
            out.nodes_explored = 1;
            return out;
        }
        if (r.status != LpStatus::optimal)
            fail("NumericalBreakdown", "root relaxation hit the iteration limit");
        root.bound = r.objective;
        root.basis = r.basis;
        root.x = r.x;
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(std::move(root));

    BnbStatus status = BnbStatus::optimal;
    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        ++explored;
        global_bound = std::max(global_bound, node.bound);  // nondecreasing by construction

        if (gap_of(node.bound) <= opts.rel_gap) {
            record();
            break;
        }
        if (node.bound >= incumbent_obj) continue;  // dominated

        if (integral(node.x, binaries)) {
            try_incumbent(node.bound, node.x);
            continue;
        }

        if (explored == 1 || explored % 8 == 0) heuristic(node);
        if (std::isfinite(incumbent_obj) && gap_of(node.bound) <= opts.rel_gap) {
            record();
            break;
        }

        if (opts.node_limit >= 0 && explored >= opts.node_limit) {
            status = BnbStatus::node_limit;
            break;
        }
        if (opts.time_limit >= 0.0 && clock.seconds() >= opts.time_limit) {
            status = BnbStatus::time_limit;
            break;
        }

        const int branch_col = most_fractional(node.x, binaries);
        if (branch_col < 0) {  // numerically integral after all
            try_incumbent(node.bound, node.x);
            continue;
        }

        for (int v = 0; v <= 1; ++v) {
            Node child;
            child.id = next_id++;
            child.fixings = node.fixings;
            child.fixings.emplace_back(branch_col, v);
            apply(child.fixings);
            LpOptions lp = opts.lp;
            lp.warm_start = node.basis;
            const LpResult r = solve_lp(work, lp);
            restore(child.fixings);
            if (r.status == LpStatus::infeasible) continue;
            if (r.status == LpStatus::unbounded) {
                out.status = BnbStatus::unbounded;
                out.nodes_explored = explored;
                return out;
            }
            if (r.status != LpStatus::optimal)
                fail("NumericalBreakdown", "node relaxation hit the iteration limit");
            if (r.objective >= incumbent_obj) continue;  // bound-dominated child
            child.bound = std::max(r.objective, node.bound);
            child.basis = r.basis;
            child.x = r.x;
            open.push(std::move(child));
        }
    }

    if (open.empty() && status == BnbStatus::optimal && std::isfinite(incumbent_obj))
        global_bound = incumbent_obj;  // tree exhausted: the incumbent is optimal

    out.nodes_explored = explored;
    out.best_bound = global_bound;
    if (!std::isfinite(incumbent_obj)) {
        out.status = status == BnbStatus::optimal ? BnbStatus::infeasible : status;
        return out;
    }
    out.status = status;
    out.objective = incumbent_obj;
    out.incumbent = std::move(incumbent_x);
    out.achieved_gap = gap_of(global_bound);
    record();
    return out;
}

}  // namespace scenagg
