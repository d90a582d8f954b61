#include "scenagg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scenagg/io.hpp"
#include "scenagg/parallel.hpp"
#include "scenagg/quality.hpp"
#include "scenagg/som.hpp"
#include "scenagg/spatial.hpp"

namespace scenagg {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string MethodSpec::name() const {
    switch (family) {
        case Family::kmeans: return "kmeans-" + (representation == RepresentativeKind::centroid
                                                     ? std::string("centroid")
                                                     : std::string("medoid"));
        case Family::kmedoids: return "kmedoids-" + (representation == RepresentativeKind::centroid
                                                         ? std::string("centroid")
                                                         : std::string("medoid"));
        case Family::hac:
            return "hac-" + to_string(linkage) + "-" +
                   (representation == RepresentativeKind::centroid ? "centroid" : "medoid");
        case Family::ctpc:
            return "ctpc-" + to_string(linkage) + "-" +
                   (representation == RepresentativeKind::centroid ? "centroid" : "medoid");
        case Family::fsa: return "fsa-" + to_string(cost);
        case Family::mda: return "mda";
        case Family::som:
            return "som-" + (representation == RepresentativeKind::centroid
                                 ? std::string("centroid")
                                 : std::string("medoid"));
        case Family::spectral: return "spectral";
    }
    return "unknown";
}

MethodSpec MethodSpec::parse(const std::string& text) {
    const std::vector<std::string> parts = split(text, ':');
    MethodSpec m;
    const std::string& fam = parts[0];
    auto rep_at = [&](std::size_t i) {
        if (parts.size() > i) m.representation = representative_kind_from_string(parts[i]);
    };
    if (fam == "kmeans") {
        m.family = Family::kmeans;
        rep_at(1);
    } else if (fam == "kmedoids") {
        m.family = Family::kmedoids;
        m.representation = RepresentativeKind::medoid;
        rep_at(1);
    } else if (fam == "hac" || fam == "ctpc") {
        m.family = fam == "hac" ? Family::hac : Family::ctpc;
        if (parts.size() > 1) m.linkage = linkage_from_string(parts[1]);
        rep_at(2);
    } else if (fam == "fsa") {
        m.family = Family::fsa;
        m.representation = RepresentativeKind::medoid;  // selects members
        if (parts.size() > 1) m.cost = cost_kind_from_string(parts[1]);
    } else if (fam == "mda") {
        m.family = Family::mda;
        m.representation = RepresentativeKind::medoid;
    } else if (fam == "som") {
        m.family = Family::som;
        rep_at(1);
    } else if (fam == "spectral") {
        m.family = Family::spectral;
        rep_at(1);
    } else {
        fail("BadSpec", "unknown method family '" + fam + "'");
    }
    return m;
}

std::vector<MethodSpec> default_method_specs() {
    std::vector<MethodSpec> out;
    const RepresentativeKind reps[] = {RepresentativeKind::centroid, RepresentativeKind::medoid};
    for (RepresentativeKind rep : reps) {
        for (const char* fam : {"kmeans", "kmedoids"}) {
            MethodSpec m;
            m.family = fam == std::string("kmeans") ? MethodSpec::Family::kmeans
                                                    : MethodSpec::Family::kmedoids;
            m.representation = rep;
            out.push_back(m);
        }
        for (LinkageKind linkage : {LinkageKind::ward, LinkageKind::average, LinkageKind::single,
                                    LinkageKind::complete}) {
            MethodSpec m;
            m.family = MethodSpec::Family::hac;
            m.linkage = linkage;
            m.representation = rep;
            out.push_back(m);
        }
    }
    for (CostKind cost : {CostKind::dupacova, CostKind::morales, CostKind::bruninx}) {
        MethodSpec m;
        m.family = MethodSpec::Family::fsa;
        m.cost = cost;
        m.representation = RepresentativeKind::medoid;
        out.push_back(m);
    }
    MethodSpec mda_spec;
    mda_spec.family = MethodSpec::Family::mda;
    mda_spec.representation = RepresentativeKind::medoid;
    out.push_back(mda_spec);
    return out;
}

namespace {

// Rebuilds a reduced set from selected source ids, pulling raw features.
ReducedSet from_selected_ids(const ScenarioSet& raw, const ReducedSet& normalized_pick) {
    std::vector<Scenario> scenarios;
    scenarios.reserve(normalized_pick.set.size());
    for (std::size_t i = 0; i < normalized_pick.set.size(); ++i) {
        Scenario s = raw.scenario(normalized_pick.set.scenario(i).id);
        scenarios.push_back(std::move(s));
    }
    ReducedSet out{ScenarioSet(std::move(scenarios), normalized_pick.set.weights(),
                               raw.channel_labels()),
                   normalized_pick.provenance};
    out.provenance.source_fingerprint = raw.fingerprint();
    return out;
}

ReducedSet from_partition_raw(const MethodSpec& method, const ScenarioSet& raw,
                              const std::vector<int>& assignment, int k) {
    Partition on_raw = make_partition(raw, assignment);
    if (method.representation != RepresentativeKind::centroid)
        on_raw = representative(on_raw, raw, method.representation, method.distance);
    Provenance prov;
    prov.method = method.name();
    std::ostringstream params;
    params << "k=" << k << ",distance=" << method.distance.describe();
    prov.params = params.str();
    prov.source_fingerprint = raw.fingerprint();
    prov.seed = method.seed;
    return reduced_from_partition(on_raw, raw, std::move(prov));
}

}  // namespace

ReducedSet apply_method(const MethodSpec& method, const ScenarioSet& raw,
                        const ScenarioSet& normalized, int k,
                        const std::optional<std::vector<double>>& dp_context,
                        const std::optional<std::vector<double>>& ss_context) {
    switch (method.family) {
        case MethodSpec::Family::kmeans: {
            const Partition p = kmeans(normalized, k, method.seed);
            return from_partition_raw(method, raw, p.assignment, k);
        }
        case MethodSpec::Family::kmedoids: {
            const Partition p = kmedoids(normalized, k, method.distance, method.seed);
            return from_partition_raw(method, raw, p.assignment, k);
        }
        case MethodSpec::Family::hac: {
            const auto [p, dendro] = hac(normalized, k, method.linkage, method.distance);
            return from_partition_raw(method, raw, p.assignment, k);
        }
        case MethodSpec::Family::ctpc: {
            const auto [p, dendro] = ctpc(normalized, k, method.linkage, method.distance);
            return from_partition_raw(method, raw, p.assignment, k);
        }
        case MethodSpec::Family::som: {
            SomOptions opts;
            const SomGrid grid = som_train(normalized, 1, k, opts, method.seed);
            const Partition p = som_partition(grid, normalized);
            return from_partition_raw(method, raw, p.assignment, k);
        }
        case MethodSpec::Family::spectral: {
            // Scenario-similarity spectral clustering via the Gaussian
            // kernel on pairwise distances.
            std::vector<std::vector<double>> rows;
            rows.reserve(normalized.size());
            for (std::size_t i = 0; i < normalized.size(); ++i)
                rows.push_back(normalized.scenario(i).features);
            const SimilarityMatrix sim = similarity_timeseries(rows, method.distance);
            const Partition p = spectral_partition(sim, k, SpectralInner{}, method.seed);
            return from_partition_raw(method, raw, p.assignment, k);
        }
        case MethodSpec::Family::fsa: {
            std::optional<std::vector<double>> ctx;
            if (method.cost == CostKind::morales) ctx = dp_context;
            if (method.cost == CostKind::bruninx) ctx = ss_context;
            const CostMatrix c = cost_matrix(normalized, method.cost, ctx);
            ReducedSet pick = forward_selection(normalized, k, c);
            pick.provenance.seed = method.seed;
            return from_selected_ids(raw, pick);
        }
        case MethodSpec::Family::mda: {
            ReducedSet pick = mda(normalized, k, method.distance);
            pick.provenance.seed = method.seed;
            return from_selected_ids(raw, pick);
        }
    }
    fail("BadSpec", "unknown method family");
}

namespace {

std::vector<std::string> built_line_names(const Network& net, const TepSolution& sol) {
    std::vector<std::string> out;
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        const Line& line = net.lines[l];
        const bool expanded =
            line.existing && sol.capacity_mw[l] > line.capacity_mw * (1.0 + 1e-6);
        if ((!line.existing && sol.built[l]) || expanded) out.push_back(line.name);
    }
    return out;
}

std::vector<double> built_line_caps(const Network& net, const TepSolution& sol) {
    std::vector<double> out;
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        const Line& line = net.lines[l];
        const bool expanded =
            line.existing && sol.capacity_mw[l] > line.capacity_mw * (1.0 + 1e-6);
        if (!line.existing && sol.built[l]) out.push_back(sol.capacity_mw[l]);
        else if (expanded) out.push_back(sol.capacity_mw[l] - line.capacity_mw);
    }
    return out;
}

struct CellOutcome {
    MethodCell cell;
    FirstStage first_stage;
    bool ok = false;
};

}  // namespace

BenchmarkReport run_benchmark(const Network& net, const ScenarioSet& scenarios,
                              const std::vector<MethodSpec>& methods, const BenchOptions& opts) {
    if (methods.empty()) fail("BadSpec", "method list is empty");
    if (opts.k_min < 1 || opts.k_max < opts.k_min ||
        opts.k_max > static_cast<int>(scenarios.size()))
        fail("BadSpec", "k range must lie within 1..N");

    const bool want_logs = !opts.log_dir.empty();
    if (want_logs) std::filesystem::create_directories(opts.log_dir);

    auto solver_opts = [&](const std::string& log_name) {
        TepSolveOptions o;
        o.mip_gap = opts.mip_gap;
        o.node_limit = opts.node_limit;
        o.time_limit = opts.time_limit;
        o.workers = 1;
        if (want_logs) {
            auto sink = std::make_shared<std::ofstream>(opts.log_dir + "/" + log_name + ".csv");
            *sink << "node,best_bound,incumbent,gap,seconds\n";
            o.log = [sink](const BnbLogRow& r) {
                *sink << r.node << "," << r.best_bound << "," << r.incumbent << "," << r.gap << ","
                      << r.seconds << "\n";
            };
        }
        return o;
    };

    BenchmarkReport report;
    report.network_name = net.name;
    report.scenario_fingerprint = scenarios.fingerprint();
    report.seed = opts.seed;
    report.mip_gap = opts.mip_gap;
    report.k_min = opts.k_min;
    report.k_max = opts.k_max;
    report.full_num_scenarios = static_cast<int>(scenarios.size());

    // Step 1: baseline with the whole scenario set.
    TepSolveOptions full_opts = solver_opts("full");
    full_opts.workers = opts.workers;
    const TepSolution full = solve_full(net, scenarios, full_opts);
    report.full_objective = full.objective;
    report.full_built_lines = built_line_names(net, full);
    report.full_capacities_mw = built_line_caps(net, full);

    // Normalization feeds the reduction algorithms only.
    NormalizationSpec norm{opts.normalization, opts.per_channel};
    const ScenarioSet normalized =
        opts.normalization == NormMethod::none ? scenarios : normalize(scenarios, norm).set;

    // Contexts for the objective-value cost functions, computed on demand.
    std::optional<std::vector<double>> dp_ctx, ss_ctx;
    for (const MethodSpec& m : methods) {
        if (m.family == MethodSpec::Family::fsa && m.cost == CostKind::morales && !dp_ctx) {
            TepSolveOptions o = solver_opts("context_dp");
            o.workers = opts.workers;
            dp_ctx = scenario_context(net, scenarios, ContextKind::dp, o);
        }
        if (m.family == MethodSpec::Family::fsa && m.cost == CostKind::bruninx && !ss_ctx) {
            TepSolveOptions o = solver_opts("context_ss");
            o.workers = opts.workers;
            ss_ctx = scenario_context(net, scenarios, ContextKind::ss, o);
        }
    }

    // Steps 2-3: reduce and solve each (method, K) cell.
    const int nk = opts.k_max - opts.k_min + 1;
    std::vector<MethodSpec> seeded(methods);
    for (std::size_t mi = 0; mi < seeded.size(); ++mi)
        seeded[mi].seed = opts.seed ^ detail::fnv1a_string(seeded[mi].name(), 0x9e3779b97f4a7c15ull);

    std::vector<CellOutcome> outcomes(seeded.size() * nk);
    parallel_for(outcomes.size(), opts.workers, [&](std::size_t idx) {
        const std::size_t mi = idx / nk;
        const int k = opts.k_min + static_cast<int>(idx % nk);
        const MethodSpec& method = seeded[mi];
        CellOutcome& oc = outcomes[idx];
        oc.cell.method = method.name();
        oc.cell.k = k;
        try {
            const double t0 = now_seconds();
            ReducedSet reduced = apply_method(method, scenarios, normalized, k, dp_ctx, ss_ctx);
            if (opts.rescale_representatives &&
                (method.selects_members() ||
                 method.representation != RepresentativeKind::centroid))
                reduced.set = rescale_to_source_means(reduced.set, scenarios);
            oc.cell.reduce_seconds = now_seconds() - t0;
            oc.cell.provenance = reduced.provenance.fingerprint();

            const double t1 = now_seconds();
            const TepSolution sol = solve_full(
                net, reduced.set, solver_opts(oc.cell.method + "_k" + std::to_string(k)));
            oc.cell.solve_seconds = now_seconds() - t1;
            oc.cell.in_sample_objective = sol.objective;
            oc.cell.in_sample_gap_pct =
                100.0 * std::abs(sol.objective - full.objective) / full.objective;
            oc.cell.built_lines = built_line_names(net, sol);
            oc.cell.capacities_mw = built_line_caps(net, sol);
            oc.first_stage = first_stage_of(sol);
            oc.ok = true;
        } catch (const Error& e) {
            oc.cell.status = e.code();
        } catch (const std::exception& e) {
            oc.cell.status = std::string("Error: ") + e.what();
        }
    });
    for (CellOutcome& oc : outcomes) report.cells.push_back(oc.cell);

    // Steps 4-5: optimal K by smallest in-sample gap, then OOS there.
    for (std::size_t mi = 0; mi < seeded.size(); ++mi) {
        MethodSummary summary;
        summary.method = seeded[mi].name();
        int best_idx = -1;
        for (int ki = 0; ki < nk; ++ki) {
            const CellOutcome& oc = outcomes[mi * nk + ki];
            if (!oc.ok) continue;
            if (best_idx < 0 ||
                oc.cell.in_sample_gap_pct <
                    outcomes[mi * nk + best_idx].cell.in_sample_gap_pct - 1e-12)
                best_idx = ki;
        }
        if (best_idx < 0) {
            summary.optimal_k = 0;
            report.methods.push_back(std::move(summary));
            continue;
        }
        const CellOutcome& best = outcomes[mi * nk + best_idx];
        summary.optimal_k = best.cell.k;
        summary.in_sample_objective = best.cell.in_sample_objective;
        summary.built_lines = best.cell.built_lines;
        summary.capacities_mw = best.cell.capacities_mw;
        try {
            TepSolveOptions o = solver_opts(summary.method + "_oos");
            o.workers = opts.workers;
            summary.oos_objective = evaluate_oos(net, best.first_stage, scenarios, o);
            summary.oos_gap_pct =
                100.0 * (summary.oos_objective - full.objective) / full.objective;
        } catch (const Error&) {
            summary.oos_objective = 0.0;
        }
        report.methods.push_back(std::move(summary));
    }

    // Step 6: reduction runtime at the largest K, measured exclusively.
    for (std::size_t mi = 0; mi < seeded.size(); ++mi) {
        std::vector<double> times;
        times.reserve(opts.repeats);
        for (int r = 0; r < opts.repeats; ++r) {
            const double t0 = now_seconds();
            try {
                apply_method(seeded[mi], scenarios, normalized, opts.k_max, dp_ctx, ss_ctx);
            } catch (const Error&) {
                break;
            }
            times.push_back(now_seconds() - t0);
        }
        if (times.empty()) continue;
        double mean = 0.0;
        for (double t : times) mean += t;
        mean /= static_cast<double>(times.size());
        double var = 0.0;
        for (double t : times) var += (t - mean) * (t - mean);
        const double sd = times.size() > 1 ? std::sqrt(var / (times.size() - 1)) : 0.0;
        report.methods[mi].method_time_mean = mean;
        report.methods[mi].method_time_sd = sd;
        const CellOutcome& last = outcomes[mi * nk + (nk - 1)];
        report.methods[mi].total_time = mean + (last.ok ? last.cell.solve_seconds : 0.0);
    }

    return report;
}

std::vector<SensitivityRow> run_sensitivity(const Network& net, const ScenarioSet& scenarios,
                                            const std::vector<double>& load_levels,
                                            const BenchOptions& opts) {
    if (load_levels.empty()) fail("BadSpec", "no load levels");
    for (double level : load_levels)
        if (!(level > 0.0)) fail("BadSpec", "load levels must be positive");

    // Demand channels are the ones bound by some bus.
    std::vector<bool> is_demand(scenarios.channels(), false);
    const auto& labels = scenarios.channel_labels();
    for (const Bus& b : net.buses)
        for (const std::string& ch : b.demand_channels)
            for (std::size_t c = 0; c < labels.size(); ++c)
                if (labels[c] == ch) is_demand[c] = true;

    std::vector<SensitivityRow> rows;
    for (double level : load_levels) {
        std::vector<Scenario> scaled = scenarios.scenarios();
        for (Scenario& s : scaled)
            for (int c = 0; c < s.channels; ++c)
                if (is_demand[c])
                    for (int t = 0; t < s.hours; ++t) s.value(t, c) *= level;
        ScenarioSet set(std::move(scaled), scenarios.weights(), labels);

        SensitivityRow row;
        row.load_level = level;
        TepSolveOptions o;
        o.mip_gap = opts.mip_gap;
        o.node_limit = opts.node_limit;
        o.time_limit = opts.time_limit;
        o.workers = opts.workers;
        const double t0 = now_seconds();
        try {
            const TepSolution sol = solve_full(net, set, o);
            row.seconds = now_seconds() - t0;
            row.nodes = sol.nodes_explored;
            row.objective = sol.objective;
            row.achieved_gap = sol.achieved_gap;
            row.trajectory = sol.trajectory;
        } catch (const Error& e) {
            row.seconds = now_seconds() - t0;
            row.objective = -1.0;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace scenagg
