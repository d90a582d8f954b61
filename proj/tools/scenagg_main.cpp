#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "scenagg/bench.hpp"
#include "scenagg/io.hpp"
#include "scenagg/milp.hpp"
#include "scenagg/parallel.hpp"
#include "scenagg/tep.hpp"

using namespace scenagg;

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::pair<int, int> parse_k_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int k = std::stoi(text);
        return {k, k};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

void print_solution(const Network& net, const TepSolution& sol) {
    std::printf("objective      %.6f\n", sol.objective);
    std::printf("investment     %.6f\n", sol.investment_cost);
    std::printf("achieved gap   %.6g\n", sol.achieved_gap);
    std::printf("nodes explored %lld\n", static_cast<long long>(sol.nodes_explored));
    std::printf("built lines    ");
    bool any = false;
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        const Line& line = net.lines[l];
        const bool expanded =
            line.existing && sol.capacity_mw[l] > line.capacity_mw * (1.0 + 1e-6);
        if ((!line.existing && sol.built[l]) || expanded) {
            std::printf("%s%s=%.1fMW", any ? ", " : "", line.name.c_str(),
                        line.existing ? sol.capacity_mw[l] - line.capacity_mw
                                      : sol.capacity_mw[l]);
            any = true;
        }
    }
    std::printf("%s\n", any ? "" : "(none)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scenario aggregation toolkit and TEP benchmark harness"};
    app.set_config("--config", "", "configuration file (ini format, flags override)");
    app.require_subcommand(1);

    std::string network_path, scenarios_path, out_dir = "out";
    std::string methods_arg, k_range_arg = "1..10", load_levels_arg;
    std::string method_arg = "kmeans:centroid", out_path;
    double mip_gap = 0.001;
    std::uint64_t seed = 1;
    int repeats = 5;
    int workers = default_workers();
    int k = 5;
    std::string normalization = "zscore";

    auto add_common = [&](CLI::App* cmd, bool needs_scenarios = true) {
        cmd->add_option("--network", network_path, "network description file")->required();
        if (needs_scenarios)
            cmd->add_option("--scenarios", scenarios_path, "hourly scenario CSV")->required();
        cmd->add_option("--mip-gap", mip_gap, "relative MIP gap");
        cmd->add_option("--seed", seed, "root random seed");
        cmd->add_option("--workers", workers, "worker thread count");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve the TEP on the full scenario set");
    add_common(solve);
    solve->add_option("--out", out_dir, "output directory");

    CLI::App* reduce_cmd = app.add_subcommand("reduce", "reduce a scenario set");
    reduce_cmd->add_option("--scenarios", scenarios_path, "hourly scenario CSV")->required();
    reduce_cmd->add_option("--method", method_arg, "method spec, e.g. hac:ward:medoid");
    reduce_cmd->add_option("--k", k, "reduced set size");
    reduce_cmd->add_option("--network", network_path,
                           "network file (required for fsa:morales / fsa:bruninx)");
    reduce_cmd->add_option("--seed", seed, "root random seed");
    reduce_cmd->add_option("--normalization", normalization, "zscore|minmax|maxabs|none");
    reduce_cmd->add_option("--out", out_path, "output CSV path")->required();
    reduce_cmd->add_option("--mip-gap", mip_gap, "relative MIP gap for context solves");
    reduce_cmd->add_option("--workers", workers, "worker thread count");

    CLI::App* bench_cmd = app.add_subcommand("bench", "run the aggregation benchmark");
    add_common(bench_cmd);
    bench_cmd->add_option("--methods", methods_arg,
                          "comma-separated method specs (default: the 16 standard methods)");
    bench_cmd->add_option("--k-range", k_range_arg, "reduced sizes, e.g. 1..10");
    bench_cmd->add_option("--repeats", repeats, "runtime measurement repetitions");
    bench_cmd->add_option("--normalization", normalization, "zscore|minmax|maxabs|none");
    bench_cmd->add_option("--out", out_dir, "output directory");

    CLI::App* sens = app.add_subcommand("sensitivity", "loadability sensitivity sweep");
    add_common(sens);
    sens->add_option("--load-levels", load_levels_arg,
                     "comma-separated demand multipliers (default 0.6..2.0 step 0.2)");
    sens->add_option("--out", out_dir, "output directory");

    CLI::App* export_mps = app.add_subcommand("export-mps", "write the TEP MILP as an MPS file");
    add_common(export_mps);
    export_mps->add_option("--out", out_path, "output MPS path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*solve) {
            const Network net = load_network(network_path);
            const ScenarioSet s = load_scenarios(scenarios_path);
            TepSolveOptions opts;
            opts.mip_gap = mip_gap;
            opts.workers = workers;
            const TepSolution sol = solve_full(net, s, opts);
            print_solution(net, sol);
            std::filesystem::create_directories(out_dir);
            std::ofstream log(out_dir + "/solve_trajectory.csv");
            log << "seconds,nodes,best_bound,incumbent,gap\n";
            for (const auto& p : sol.trajectory)
                log << p.seconds << "," << p.nodes << "," << p.best_bound << "," << p.incumbent
                    << "," << p.gap << "\n";
            return 0;
        }

        if (*reduce_cmd) {
            const ScenarioSet raw = load_scenarios(scenarios_path);
            MethodSpec method = MethodSpec::parse(method_arg);
            method.seed = seed ^ detail::fnv1a_string(method.name(), 0x9e3779b97f4a7c15ull);
            const NormMethod nm = norm_method_from_string(normalization);
            const ScenarioSet norm =
                nm == NormMethod::none ? raw : normalize(raw, {nm, true}).set;

            std::optional<std::vector<double>> dp_ctx, ss_ctx;
            if (method.family == MethodSpec::Family::fsa && method.cost != CostKind::dupacova) {
                if (network_path.empty())
                    fail("BadSpec", "fsa:" + to_string(method.cost) + " needs --network");
                const Network net = load_network(network_path);
                TepSolveOptions opts;
                opts.mip_gap = mip_gap;
                opts.workers = workers;
                if (method.cost == CostKind::morales)
                    dp_ctx = scenario_context(net, raw, ContextKind::dp, opts);
                else
                    ss_ctx = scenario_context(net, raw, ContextKind::ss, opts);
            }
            const ReducedSet reduced = apply_method(method, raw, norm, k, dp_ctx, ss_ctx);
            write_scenario_csv(reduced.set, out_path);
            std::ofstream weights(out_path + ".weights.csv");
            weights << "scenario,weight\n";
            for (std::size_t i = 0; i < reduced.set.size(); ++i)
                weights << reduced.set.scenario(i).id << "," << reduced.set.weight(i) << "\n";
            std::printf("wrote %zu scenarios to %s (weights alongside)\n", reduced.set.size(),
                        out_path.c_str());
            return 0;
        }

        if (*bench_cmd) {
            const Network net = load_network(network_path);
            const ScenarioSet s = load_scenarios(scenarios_path);
            std::vector<MethodSpec> methods;
            if (methods_arg.empty()) {
                methods = default_method_specs();
            } else {
                for (const std::string& text : split_list(methods_arg))
                    methods.push_back(MethodSpec::parse(text));
            }
            BenchOptions opts;
            std::tie(opts.k_min, opts.k_max) = parse_k_range(k_range_arg);
            opts.mip_gap = mip_gap;
            opts.seed = seed;
            opts.repeats = repeats;
            opts.workers = workers;
            opts.normalization = norm_method_from_string(normalization);
            opts.log_dir = out_dir + "/logs";
            const BenchmarkReport report = run_benchmark(net, s, methods, opts);
            write_report(report, out_dir);
            int failed = 0;
            for (const MethodCell& cell : report.cells)
                if (cell.status != "ok") ++failed;
            std::printf("baseline objective %.6f over %d scenarios\n", report.full_objective,
                        report.full_num_scenarios);
            std::printf("%zu cells, %d failed; report written to %s\n", report.cells.size(),
                        failed, out_dir.c_str());
            return failed == 0 ? 0 : 2;
        }

        if (*sens) {
            const Network net = load_network(network_path);
            const ScenarioSet s = load_scenarios(scenarios_path);
            std::vector<double> levels;
            if (load_levels_arg.empty()) {
                for (int i = 0; i <= 7; ++i) levels.push_back(0.6 + 0.2 * i);
            } else {
                for (const std::string& text : split_list(load_levels_arg))
                    levels.push_back(std::stod(text));
            }
            BenchOptions opts;
            opts.mip_gap = mip_gap;
            opts.workers = workers;
            const auto rows = run_sensitivity(net, s, levels, opts);
            write_sensitivity(rows, out_dir);
            for (const SensitivityRow& row : rows)
                std::printf("load %.0f%%  time %.2fs  nodes %lld  objective %.6f\n",
                            row.load_level * 100.0, row.seconds,
                            static_cast<long long>(row.nodes), row.objective);
            return 0;
        }

        if (*export_mps) {
            const Network net = load_network(network_path);
            const ScenarioSet s = load_scenarios(scenarios_path);
            const TepModel model = build_tep(net, s);
            const MpsNameMap map = write_mps(model.milp, out_path);
            std::printf("wrote %s (%d rows, %d columns, %zu renamed)\n", out_path.c_str(),
                        model.milp.num_rows(), model.milp.num_variables(),
                        map.rows.size() + map.columns.size());
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
