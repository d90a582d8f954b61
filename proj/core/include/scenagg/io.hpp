#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenagg/network.hpp"
#include "scenagg/report.hpp"
#include "scenagg/scenario.hpp"

namespace scenagg {

/// Loads an hourly scenario CSV (header of channel labels, one row per
/// hour, leading timestamp column) and folds the rows into daily
/// scenarios with uniform weights. The hour count must be divisible by
/// 24; parse failures carry line/column diagnostics.
ScenarioSet load_scenarios(const std::string& path);

/// Writes the set back to the same CSV shape at full double precision, so
/// load_scenarios(write_scenario_csv(s)) == s. Weights are not stored.
void write_scenario_csv(const ScenarioSet& s, const std::string& path);

/// Parses the sectioned network description ([buses], [lines],
/// [conventional], [renewables]); see docs/formats.md for the schema.
Network load_network(const std::string& path);

void write_network(const Network& net, const std::string& path);

/// Emits report.json (provenance and objectives; no wall-clock fields, so
/// reruns are byte-identical), comparison.csv (Table-4 layout) and
/// runtime.csv (method timing) into the directory.
void write_report(const BenchmarkReport& r, const std::string& dir);

/// Emits sensitivity.csv (per-level summary) and sensitivity_trajectory.csv
/// (gap/node trajectories) into the directory.
void write_sensitivity(const std::vector<SensitivityRow>& rows, const std::string& dir);

/// Synthetic one-year-style fixture: daily and seasonal shapes plus seeded
/// noise for load channels, bounded gusty availability for wind channels.
struct SyntheticChannel {
    std::string label;
    bool is_wind = false;
    double base_mw = 0.0;  // load: mean level; wind: installed capacity
};

struct SyntheticSpec {
    int days = 365;
    std::vector<SyntheticChannel> channels;
};

ScenarioSet synthetic_scenarios(const SyntheticSpec& spec, std::uint64_t seed);

/// The modified Garver 6-bus system: wind replaces the thermal unit at
/// bus 1, nine unbuilt candidate corridors, every existing line expandable
/// to three parallel circuits.
Network garver6_network();

/// Channel spec matching garver6_network's bindings (five load buses plus
/// one wind profile).
SyntheticSpec garver6_synthetic_spec(int days);

/// Small two-bus system (wind + cheap generation behind one congested
/// corridor, two candidate reinforcements) for year-scale pipeline runs
/// that stay tractable for the bundled solver.
Network duo2_network();

SyntheticSpec duo2_synthetic_spec(int days);

}  // namespace scenagg
