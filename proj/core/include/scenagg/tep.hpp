#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scenagg/milp.hpp"
#include "scenagg/network.hpp"
#include "scenagg/scenario.hpp"

namespace scenagg {

/// Column layout of a built TEP instance, for extracting solutions.
struct TepLayout {
    int hours = 0;
    int num_scenarios = 0;
    std::vector<int> x;     // per line; -1 for existing lines (x == 1)
    std::vector<int> fmax;  // per line
    int theta_base = 0, flow_base = 0, pgen_base = 0, pren_base = 0, shed_base = 0;
    int num_buses = 0, num_lines = 0, num_conventional = 0, num_renewables = 0;

    int theta(int bus, int t, int k) const {
        return theta_base + (k * hours + t) * num_buses + bus;
    }
    int flow(int line, int t, int k) const {
        return flow_base + (k * hours + t) * num_lines + line;
    }
    int pgen(int gen, int t, int k) const {
        return pgen_base + (k * hours + t) * num_conventional + gen;
    }
    int pren(int gen, int t, int k) const {
        return pren_base + (k * hours + t) * num_renewables + gen;
    }
    int shed(int bus, int t, int k) const {
        return shed_base + (k * hours + t) * num_buses + bus;
    }
};

struct TepModel {
    MilpInstance milp;
    TepLayout layout;
};

/// Two-stage TEP MILP over the given scenario set: line-building binaries
/// and continuous capacities in the first stage; DC dispatch with load
/// shedding per scenario-hour in the second. Scenario weights multiply the
/// operational costs. Existing-line expansion is charged at cost_var per
/// MW above the base capacity.
TepModel build_tep(const Network& net, const ScenarioSet& s);

struct TepSolveOptions {
    double mip_gap = 0.001;       // relative MIP gap ("0.1%")
    std::int64_t node_limit = -1;
    double time_limit = -1.0;
    int workers = 1;              // per-scenario LP parallelism
    std::function<void(const BnbLogRow&)> log;
};

struct TepSolution {
    BnbStatus status = BnbStatus::infeasible;
    double objective = 0.0;
    double achieved_gap = 0.0;
    std::int64_t nodes_explored = 0;
    std::vector<bool> built;              // per line
    std::vector<double> capacity_mw;      // per line
    double investment_cost = 0.0;
    std::vector<double> scenario_op_cost; // unweighted operating cost per scenario
    double shed_energy_mwh = 0.0;         // weight-summed
    std::vector<BnbTrajectoryPoint> trajectory;
    std::vector<double> raw_x;            // full variable vector of the incumbent
};

/// Builds and solves the TEP MILP for the whole scenario set.
TepSolution solve_full(const Network& net, const ScenarioSet& s, const TepSolveOptions& opts = {});

struct FirstStage {
    std::vector<bool> built;
    std::vector<double> capacity_mw;
};

FirstStage first_stage_of(const TepSolution& sol);

/// Fixes the first-stage decisions and evaluates the recourse on the full
/// set: one independent LP per scenario, weight-summed, plus the fixed
/// investment cost. Load shedding keeps every recourse feasible.
double evaluate_oos(const Network& net, const FirstStage& fs, const ScenarioSet& full,
                    const TepSolveOptions& opts = {});

enum class ContextKind { dp, ss };

/// Per-scenario objective values feeding the morales (dp) and bruninx (ss)
/// reduction cost functions. ss solves the singleton problem per scenario
/// at full weight; dp fixes the expected-value first stage and prices each
/// scenario's recourse.
std::vector<double> scenario_context(const Network& net, const ScenarioSet& s, ContextKind kind,
                                     const TepSolveOptions& opts = {});

/// Investment cost of a first stage under the network's cost model.
double investment_cost(const Network& net, const FirstStage& fs);

}  // namespace scenagg
