#include "scenagg/tep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenagg/parallel.hpp"

namespace scenagg {

namespace {

constexpr double kPi = std::numbers::pi;

std::string idx3(const char* stem, int a, int t, int k) {
    return std::string(stem) + "_" + std::to_string(a) + "_" + std::to_string(t) + "_" +
           std::to_string(k);
}

double demand_at(const Network& net, const ScenarioSet& s, int bus, int t, int k,
                 const std::vector<std::vector<int>>& demand_channels) {
    double d = 0.0;
    for (int c : demand_channels[bus]) d += s.scenario(k).value(t, c);
    return d;
}

std::vector<std::vector<int>> bind_demands(const Network& net, const ScenarioSet& s) {
    std::vector<std::vector<int>> out(net.buses.size());
    const auto& labels = s.channel_labels();
    for (std::size_t b = 0; b < net.buses.size(); ++b)
        for (const std::string& ch : net.buses[b].demand_channels) {
            const auto it = std::find(labels.begin(), labels.end(), ch);
            if (it == labels.end()) fail("UnboundChannel", "demand channel '" + ch + "' unbound");
            out[b].push_back(static_cast<int>(it - labels.begin()));
        }
    return out;
}

std::vector<int> bind_renewables(const Network& net, const ScenarioSet& s) {
    std::vector<int> out(net.renewables.size());
    const auto& labels = s.channel_labels();
    for (std::size_t r = 0; r < net.renewables.size(); ++r) {
        const auto it = std::find(labels.begin(), labels.end(), net.renewables[r].profile_channel);
        if (it == labels.end())
            fail("UnboundChannel",
                 "renewable channel '" + net.renewables[r].profile_channel + "' unbound");
        out[r] = static_cast<int>(it - labels.begin());
    }
    return out;
}

}  // namespace

TepModel build_tep(const Network& net, const ScenarioSet& s) {
    net.validate(s.channel_labels());
    const auto demand_channels = bind_demands(net, s);
    const auto ren_channels = bind_renewables(net, s);

    const int T = s.hours();
    const int K = static_cast<int>(s.size());
    const int nb = static_cast<int>(net.buses.size());
    const int nl = static_cast<int>(net.lines.size());
    const int ng = static_cast<int>(net.conventional.size());
    const int nr = static_cast<int>(net.renewables.size());

    TepModel model;
    MilpInstance& m = model.milp;
    TepLayout& lay = model.layout;
    lay.hours = T;
    lay.num_scenarios = K;
    lay.num_buses = nb;
    lay.num_lines = nl;
    lay.num_conventional = ng;
    lay.num_renewables = nr;
    lay.x.assign(nl, -1);
    lay.fmax.assign(nl, -1);

    double offset = 0.0;

    // First stage: build decisions and corridor capacities.
    for (int l = 0; l < nl; ++l) {
        const Line& line = net.lines[l];
        if (!line.existing)
            lay.x[l] = m.add_variable("x_" + std::to_string(l), 0.0, 1.0, line.cost_fix, true);
    }
    for (int l = 0; l < nl; ++l) {
        const Line& line = net.lines[l];
        if (line.existing) {
            // Expansion above the base capacity is charged at cost_var.
            lay.fmax[l] = m.add_variable("fmax_" + std::to_string(l), line.capacity_mw,
                                         line.capacity_mw * line.corridor_mult, line.cost_var);
            offset -= line.cost_var * line.capacity_mw;
        } else {
            lay.fmax[l] = m.add_variable("fmax_" + std::to_string(l), 0.0, line.capacity_mw,
                                         line.cost_var);
        }
    }

    // Second stage, scenario-major: angles, flows, generation, shedding.
    lay.theta_base = m.num_variables();
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t)
            for (int b = 0; b < nb; ++b) {
                const bool reference = b == 0;  // lowest-numbered bus
                m.add_variable(idx3("th", b, t, k), reference ? 0.0 : -kPi,
                               reference ? 0.0 : kPi, 0.0);
            }
    lay.flow_base = m.num_variables();
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t)
            for (int l = 0; l < nl; ++l) {
                const double cap = net.lines[l].capacity_mw * net.lines[l].corridor_mult;
                m.add_variable(idx3("f", l, t, k), -cap, cap, 0.0);
            }
    lay.pgen_base = m.num_variables();
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t)
            for (int g = 0; g < ng; ++g)
                m.add_variable(idx3("pg", g, t, k), 0.0, net.conventional[g].p_max_mw,
                               s.weight(k) * net.conventional[g].cost_op);
    lay.pren_base = m.num_variables();
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t)
            for (int r = 0; r < nr; ++r) {
                const double avail =
                    std::max(0.0, s.scenario(k).value(t, ren_channels[r]));
                m.add_variable(idx3("pr", r, t, k), 0.0, avail, 0.0);
            }
    lay.shed_base = m.num_variables();
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < T; ++t)
            for (int b = 0; b < nb; ++b)
                m.add_variable(idx3("sh", b, t, k), 0.0, kInf, s.weight(k) * net.shed_cost);

    m.set_objective_offset(offset);

    // Capacity window per line (candidates couple capacity to the build
    // decision; existing lines carry it in their bounds).
    for (int l = 0; l < nl; ++l) {
        const Line& line = net.lines[l];
        if (line.existing) continue;
        m.add_row("cap_hi_" + std::to_string(l), RowSense::le, 0.0,
                  {{lay.fmax[l], 1.0}, {lay.x[l], -line.capacity_mw}});
        m.add_row("cap_lo_" + std::to_string(l), RowSense::ge, 0.0,
                  {{lay.fmax[l], 1.0}, {lay.x[l], -line.capacity_min_mw}});
    }

    int balance_rows = 0, flowdef_rows = 0;

    for (int k = 0; k < K; ++k) {
        for (int t = 0; t < T; ++t) {
            // Nodal power balance with shedding slack.
            for (int b = 0; b < nb; ++b) {
                std::vector<std::pair<int, double>> coeffs;
                for (int g = 0; g < ng; ++g)
                    if (net.conventional[g].bus == b) coeffs.emplace_back(lay.pgen(g, t, k), 1.0);
                for (int r = 0; r < nr; ++r)
                    if (net.renewables[r].bus == b) coeffs.emplace_back(lay.pren(r, t, k), 1.0);
                for (int l = 0; l < nl; ++l) {
                    if (net.lines[l].from == b) coeffs.emplace_back(lay.flow(l, t, k), -1.0);
                    else if (net.lines[l].to == b) coeffs.emplace_back(lay.flow(l, t, k), 1.0);
                }
                coeffs.emplace_back(lay.shed(b, t, k), 1.0);
                m.add_row(idx3("bal", b, t, k), RowSense::eq,
                          demand_at(net, s, b, t, k, demand_channels), std::move(coeffs));
                ++balance_rows;
            }

            // DC flow definition, big-M deactivated for unbuilt candidates.
            for (int l = 0; l < nl; ++l) {
                const Line& line = net.lines[l];
                const double beff = line.susceptance * net.s_base_mva;
                const double big_m = beff * 2.0 * kPi + line.capacity_mw * line.corridor_mult;
                const int fi = lay.flow(l, t, k);
                const int ti = lay.theta(line.from, t, k);
                const int tj = lay.theta(line.to, t, k);
                if (line.existing) {
                    m.add_row(idx3("pf_u", l, t, k), RowSense::le, 0.0,
                              {{fi, 1.0}, {ti, beff}, {tj, -beff}});
                    m.add_row(idx3("pf_l", l, t, k), RowSense::ge, 0.0,
                              {{fi, 1.0}, {ti, beff}, {tj, -beff}});
                } else {
                    m.add_row(idx3("pf_u", l, t, k), RowSense::le, big_m,
                              {{fi, 1.0}, {ti, beff}, {tj, -beff}, {lay.x[l], big_m}});
                    m.add_row(idx3("pf_l", l, t, k), RowSense::ge, -big_m,
                              {{fi, 1.0}, {ti, beff}, {tj, -beff}, {lay.x[l], -big_m}});
                }
                flowdef_rows += 2;

                // Flow within the corridor capacity.
                m.add_row(idx3("fc_u", l, t, k), RowSense::le, 0.0,
                          {{fi, 1.0}, {lay.fmax[l], -1.0}});
                m.add_row(idx3("fc_l", l, t, k), RowSense::ge, 0.0,
                          {{fi, 1.0}, {lay.fmax[l], 1.0}});
            }

            // Conventional ramping between consecutive hours of the day.
            if (t >= 1) {
                for (int g = 0; g < ng; ++g) {
                    const ConventionalGenerator& gen = net.conventional[g];
                    m.add_row(idx3("rmp_u", g, t, k), RowSense::le, gen.ramp_up_mw,
                              {{lay.pgen(g, t, k), 1.0}, {lay.pgen(g, t - 1, k), -1.0}});
                    m.add_row(idx3("rmp_l", g, t, k), RowSense::ge, gen.ramp_down_mw,
                              {{lay.pgen(g, t, k), 1.0}, {lay.pgen(g, t - 1, k), -1.0}});
                }
            }
        }
    }

    if (balance_rows != nb * T * K || flowdef_rows != 2 * nl * T * K)
        fail("InternalError", "TEP constraint counts do not match the layout");

    m.validate();
    return model;
}

namespace {

TepSolution extract_solution(const Network& net, const ScenarioSet& s, const TepModel& model,
                             const std::vector<double>& x, double objective) {
    const TepLayout& lay = model.layout;
    TepSolution sol;
    sol.objective = objective;
    sol.built.resize(lay.num_lines);
    sol.capacity_mw.resize(lay.num_lines);
    for (int l = 0; l < lay.num_lines; ++l) {
        sol.built[l] = net.lines[l].existing || x[lay.x[l]] > 0.5;
        sol.capacity_mw[l] = x[lay.fmax[l]];
    }
    FirstStage fs{sol.built, sol.capacity_mw};
    sol.investment_cost = investment_cost(net, fs);

    sol.scenario_op_cost.assign(lay.num_scenarios, 0.0);
    for (int k = 0; k < lay.num_scenarios; ++k) {
        double op = 0.0;
        for (int t = 0; t < lay.hours; ++t) {
            for (int g = 0; g < lay.num_conventional; ++g)
                op += net.conventional[g].cost_op * x[lay.pgen(g, t, k)];
            for (int b = 0; b < lay.num_buses; ++b) {
                op += net.shed_cost * x[lay.shed(b, t, k)];
                sol.shed_energy_mwh += s.weight(k) * x[lay.shed(b, t, k)];
            }
        }
        sol.scenario_op_cost[k] = op;
    }
    sol.raw_x = x;
    return sol;
}

}  // namespace

TepSolution solve_full(const Network& net, const ScenarioSet& s, const TepSolveOptions& opts) {
    TepModel model = build_tep(net, s);

    BnbOptions bnb;
    bnb.rel_gap = opts.mip_gap;
    bnb.node_limit = opts.node_limit;
    bnb.time_limit = opts.time_limit;
    bnb.log = opts.log;
    const BnbResult r = branch_and_bound(model.milp, bnb);
    if (r.status == BnbStatus::infeasible || r.status == BnbStatus::unbounded)
        fail("InfeasibleModel", "TEP solve ended without an incumbent");

    TepSolution sol = extract_solution(net, s, model, r.incumbent, r.objective);
    sol.status = r.status;
    sol.achieved_gap = r.achieved_gap;
    sol.nodes_explored = r.nodes_explored;
    sol.trajectory = r.trajectory;
    return sol;
}

FirstStage first_stage_of(const TepSolution& sol) { return {sol.built, sol.capacity_mw}; }

double investment_cost(const Network& net, const FirstStage& fs) {
    double cost = 0.0;
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        const Line& line = net.lines[l];
        if (line.existing) {
            cost += line.cost_var * (fs.capacity_mw[l] - line.capacity_mw);
        } else if (fs.built[l]) {
            cost += line.cost_fix + line.cost_var * fs.capacity_mw[l];
        }
    }
    return cost;
}

namespace {

// Single-scenario recourse LP with the first stage pinned by bounds.
double recourse_cost(const Network& net, const FirstStage& fs, const Scenario& scenario,
                     const std::vector<std::string>& labels) {
    std::vector<Scenario> one{scenario};
    one.front().id = 0;
    ScenarioSet singleton(std::move(one), {1.0}, labels);
    TepModel model = build_tep(net, singleton);
    for (int l = 0; l < model.layout.num_lines; ++l) {
        const double v = fs.built[l] ? 1.0 : 0.0;
        if (model.layout.x[l] >= 0) {
            model.milp.variable(model.layout.x[l]).lower = v;
            model.milp.variable(model.layout.x[l]).upper = v;
        }
        model.milp.variable(model.layout.fmax[l]).lower = fs.capacity_mw[l];
        model.milp.variable(model.layout.fmax[l]).upper = fs.capacity_mw[l];
    }
    const LpResult r = solve_lp(model.milp);
    if (r.status != LpStatus::optimal)
        fail("NumericalBreakdown", "recourse LP did not solve to optimality");
    // Strip the investment part: fixed capacities contribute their cost
    // through the objective regardless of dispatch.
    double invest = 0.0;
    for (int l = 0; l < model.layout.num_lines; ++l) {
        const Line& line = net.lines[l];
        if (line.existing) invest += line.cost_var * (fs.capacity_mw[l] - line.capacity_mw);
        else if (fs.built[l]) invest += line.cost_fix + line.cost_var * fs.capacity_mw[l];
        else invest += line.cost_var * fs.capacity_mw[l];  // fmax pinned even when unbuilt
    }
    return r.objective - invest;
}

}  // namespace

double evaluate_oos(const Network& net, const FirstStage& fs, const ScenarioSet& full,
                    const TepSolveOptions& opts) {
    if (fs.built.size() != net.lines.size() || fs.capacity_mw.size() != net.lines.size())
        fail("MismatchedSource", "first stage does not match the network");
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
        const Line& line = net.lines[l];
        const double cap = fs.capacity_mw[l];
        const double hi = line.existing ? line.capacity_mw * line.corridor_mult
                                        : (fs.built[l] ? line.capacity_mw : 0.0);
        const double lo = line.existing ? line.capacity_mw
                                        : (fs.built[l] ? line.capacity_min_mw : 0.0);
        if (cap < lo - 1e-6 || cap > hi + 1e-6)
            fail("InfeasibleBounds", "first-stage capacity outside the line bounds");
    }

    std::vector<double> recourse(full.size(), 0.0);
    parallel_for(full.size(), opts.workers, [&](std::size_t k) {
        recourse[k] = recourse_cost(net, fs, full.scenario(k), full.channel_labels());
    });
    double total = investment_cost(net, fs);
    for (std::size_t k = 0; k < full.size(); ++k) total += full.weight(k) * recourse[k];
    return total;
}

std::vector<double> scenario_context(const Network& net, const ScenarioSet& s, ContextKind kind,
                                     const TepSolveOptions& opts) {
    const double total_weight = s.total_weight();
    std::vector<double> out(s.size(), 0.0);

    if (kind == ContextKind::ss) {
        // Objective with the second stage represented only by scenario w.
        parallel_for(s.size(), opts.workers, [&](std::size_t k) {
            std::vector<Scenario> one{s.scenario(k)};
            one.front().id = 0;
            ScenarioSet singleton(std::move(one), {total_weight}, s.channel_labels());
            TepSolveOptions inner = opts;
            inner.workers = 1;
            inner.log = nullptr;
            out[k] = solve_full(net, singleton, inner).objective;
        });
        return out;
    }

    // dp: expected-value first stage, then each scenario's recourse.
    std::vector<double> mean(s.scenario(0).dim(), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k)
        for (std::size_t d = 0; d < mean.size(); ++d)
            mean[d] += s.probability(k) * s.scenario(k).features[d];
    Scenario ev;
    ev.id = 0;
    ev.hours = s.hours();
    ev.channels = s.channels();
    ev.features = std::move(mean);
    ScenarioSet ev_set({ev}, {total_weight}, s.channel_labels());
    TepSolveOptions ev_opts = opts;
    ev_opts.workers = 1;
    ev_opts.log = nullptr;
    const TepSolution ev_sol = solve_full(net, ev_set, ev_opts);
    const FirstStage fs = first_stage_of(ev_sol);
    const double invest = investment_cost(net, fs);

    parallel_for(s.size(), opts.workers, [&](std::size_t k) {
        const double rc = recourse_cost(net, fs, s.scenario(k), s.channel_labels());
        out[k] = invest + total_weight * rc;
    });
    return out;
}

}  // namespace scenagg
