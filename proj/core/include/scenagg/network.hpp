#pragma once

#include <string>
#include <vector>

#include "scenagg/error.hpp"
#include "scenagg/scenario.hpp"

namespace scenagg {

struct Bus {
    std::string name;
    std::vector<std::string> demand_channels;  // scenario channels serving this bus
};

/// Transmission corridor element. Existing lines are always built; their
/// capacity may grow from capacity_mw up to corridor_mult * capacity_mw at
/// cost_var per added MW. Candidate lines carry a binary build decision
/// with capacity in [capacity_min_mw, capacity_mw] when built.
struct Line {
    std::string name;
    int from = 0;
    int to = 0;
    double susceptance = 0.0;     // per-unit, > 0
    double capacity_mw = 0.0;     // F^max
    double capacity_min_mw = 0.0; // F^min (candidates: smallest buildable size)
    double cost_fix = 0.0;        // currency, candidates only
    double cost_var = 0.0;        // currency per MW of capacity
    bool existing = false;
    double corridor_mult = 1.0;   // existing lines: expansion headroom factor
};

struct ConventionalGenerator {
    std::string name;
    int bus = 0;
    double p_max_mw = 0.0;
    double cost_op = 0.0;       // currency per MWh
    double ramp_up_mw = 0.0;    // >= 0
    double ramp_down_mw = 0.0;  // <= 0
};

struct RenewableGenerator {
    std::string name;
    int bus = 0;
    std::string profile_channel;  // scenario channel with hourly capacity, MW
};

/// Buses, lines, generators and their scenario-channel bindings.
struct Network {
    std::string name;
    double s_base_mva = 100.0;
    double shed_cost = 10000.0;  // value of lost load, currency per MWh
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<ConventionalGenerator> conventional;
    std::vector<RenewableGenerator> renewables;

    int bus_index(const std::string& name) const;

    /// Structural validation plus channel-binding checks against labels.
    void validate(const std::vector<std::string>& channel_labels) const;
    void validate() const;
};

}  // namespace scenagg
