#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenagg/io.hpp"
#include "scenagg/rng.hpp"

namespace scenagg {

namespace {

// Hourly load profile, per unit of the daily peak.
constexpr double kLoadShape[24] = {0.62, 0.58, 0.56, 0.55, 0.56, 0.60, 0.68, 0.78,
                                   0.85, 0.88, 0.90, 0.91, 0.90, 0.88, 0.86, 0.86,
                                   0.88, 0.93, 1.00, 0.98, 0.92, 0.82, 0.72, 0.65};

constexpr double kTau = 2.0 * std::numbers::pi;

}  // namespace

ScenarioSet synthetic_scenarios(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.days < 1) fail("BadSpec", "need at least one day");
    if (spec.channels.empty()) fail("BadSpec", "need at least one channel");
    Rng rng(seed);

    const int days = spec.days;
    const std::size_t channels = spec.channels.size();
    std::vector<std::vector<double>> profiles(days, std::vector<double>(24 * channels, 0.0));

    for (std::size_t c = 0; c < channels; ++c) {
        const SyntheticChannel& ch = spec.channels[c];
        const double phase = 0.3 * static_cast<double>(c);  // buses differ slightly
        for (int d = 0; d < days; ++d) {
            if (ch.is_wind) {
                // Gusty availability: seasonal mean plus mean-reverting noise.
                const double season = 0.45 + 0.20 * std::cos(kTau * (d + 40) / 365.0);
                double w = season + 0.30 * (2.0 * rng.uniform() - 1.0);
                for (int t = 0; t < 24; ++t) {
                    w += 0.15 * (season - w) + 0.18 * (2.0 * rng.uniform() - 1.0);
                    const double clamped = std::clamp(w, 0.02, 0.98);
                    profiles[d][c * 24 + t] = ch.base_mw * clamped;
                }
            } else {
                const double season = 1.0 + 0.15 * std::cos(kTau * (d - 15) / 365.0 + phase);
                const double level = 1.0 + 0.06 * (2.0 * rng.uniform() - 1.0);
                for (int t = 0; t < 24; ++t) {
                    const double jitter = 1.0 + 0.02 * (2.0 * rng.uniform() - 1.0);
                    profiles[d][c * 24 + t] =
                        ch.base_mw * season * level * kLoadShape[t] * jitter;
                }
            }
        }
    }

    std::vector<std::string> labels(channels);
    for (std::size_t c = 0; c < channels; ++c) labels[c] = spec.channels[c].label;
    return make_scenario_set(profiles, {}, labels);
}

Network garver6_network() {
    Network net;
    net.name = "garver6";
    net.s_base_mva = 100.0;
    net.shed_cost = 10000.0;

    net.buses = {
        {"b1", {"load_b1"}}, {"b2", {"load_b2"}}, {"b3", {"load_b3"}},
        {"b4", {"load_b4"}}, {"b5", {"load_b5"}}, {"b6", {}},
    };

    struct Corridor {
        const char* name;
        int from, to;
        double reactance;  // per unit
        double capacity;
        double cost;       // classic corridor cost figure
        bool existing;
    };
    const Corridor corridors[] = {
        {"l1-2", 0, 1, 0.40, 100.0, 40.0, true},
        {"l1-4", 0, 3, 0.60, 80.0, 60.0, true},
        {"l1-5", 0, 4, 0.20, 100.0, 20.0, true},
        {"l2-3", 1, 2, 0.20, 100.0, 20.0, true},
        {"l2-4", 1, 3, 0.40, 100.0, 40.0, true},
        {"l3-5", 2, 4, 0.20, 100.0, 20.0, true},
        {"c1-3", 0, 2, 0.38, 100.0, 38.0, false},
        {"c1-6", 0, 5, 0.68, 70.0, 68.0, false},
        {"c2-5", 1, 4, 0.31, 100.0, 31.0, false},
        {"c2-6", 1, 5, 0.30, 100.0, 30.0, false},
        {"c3-4", 2, 3, 0.59, 82.0, 59.0, false},
        {"c3-6", 2, 5, 0.48, 100.0, 48.0, false},
        {"c4-5", 3, 4, 0.63, 75.0, 63.0, false},
        {"c4-6", 3, 5, 0.30, 100.0, 30.0, false},
        {"c5-6", 4, 5, 0.61, 78.0, 61.0, false},
    };
    for (const Corridor& c : corridors) {
        Line l;
        l.name = c.name;
        l.from = c.from;
        l.to = c.to;
        l.susceptance = 1.0 / c.reactance;
        l.capacity_mw = c.capacity;
        l.capacity_min_mw = c.existing ? c.capacity : 0.2 * c.capacity;
        l.cost_fix = c.existing ? 0.0 : 10000.0 * c.cost;
        l.cost_var = 40.0 * c.cost;
        l.existing = c.existing;
        l.corridor_mult = c.existing ? 3.0 : 1.0;
        net.lines.push_back(std::move(l));
    }

    net.conventional = {
        {"g3", 2, 360.0, 20.0, 150.0, -150.0},
        {"g6", 5, 600.0, 30.0, 250.0, -250.0},
    };
    net.renewables = {{"w1", 0, "wind_w1"}};

    net.validate();
    return net;
}

SyntheticSpec garver6_synthetic_spec(int days) {
    SyntheticSpec spec;
    spec.days = days;
    spec.channels = {
        {"load_b1", false, 70.0},  {"load_b2", false, 210.0}, {"load_b3", false, 35.0},
        {"load_b4", false, 140.0}, {"load_b5", false, 210.0}, {"wind_w1", true, 150.0},
    };
    return spec;
}

Network duo2_network() {
    Network net;
    net.name = "duo2";
    net.s_base_mva = 100.0;
    net.shed_cost = 10000.0;
    net.buses = {{"b1", {}}, {"b2", {"load_b2"}}};

    Line existing;
    existing.name = "l1-2";
    existing.from = 0;
    existing.to = 1;
    existing.susceptance = 2.0;
    existing.capacity_mw = 90.0;
    existing.capacity_min_mw = 90.0;
    existing.cost_var = 2600.0;
    existing.existing = true;
    existing.corridor_mult = 1.5;
    net.lines.push_back(existing);

    Line ca;
    ca.name = "c1-2a";
    ca.from = 0;
    ca.to = 1;
    ca.susceptance = 1.0;
    ca.capacity_mw = 80.0;
    ca.capacity_min_mw = 16.0;
    ca.cost_fix = 250000.0;
    ca.cost_var = 1100.0;
    ca.existing = false;
    net.lines.push_back(ca);

    Line cb = ca;
    cb.name = "c1-2b";
    cb.susceptance = 0.5;
    cb.capacity_mw = 60.0;
    cb.capacity_min_mw = 12.0;
    cb.cost_fix = 150000.0;
    cb.cost_var = 1500.0;
    net.lines.push_back(cb);

    net.conventional = {
        {"g1", 0, 300.0, 15.0, 120.0, -120.0},
        {"g2", 1, 120.0, 45.0, 60.0, -60.0},
    };
    net.renewables = {{"w1", 0, "wind_w1"}};
    net.validate();
    return net;
}

SyntheticSpec duo2_synthetic_spec(int days) {
    SyntheticSpec spec;
    spec.days = days;
    spec.channels = {
        {"load_b2", false, 190.0},
        {"wind_w1", true, 100.0},
    };
    return spec;
}

}  // namespace scenagg
