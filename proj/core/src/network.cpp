#include "scenagg/network.hpp"

#include <algorithm>
#include <cmath>

namespace scenagg {

int Network::bus_index(const std::string& bus_name) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].name == bus_name) return static_cast<int>(i);
    fail("DanglingReference", "unknown bus '" + bus_name + "'");
}

void Network::validate() const {
    if (buses.empty()) fail("SchemaError", "network has no buses");
    const int nb = static_cast<int>(buses.size());
    for (const Line& l : lines) {
        if (l.from < 0 || l.from >= nb || l.to < 0 || l.to >= nb)
            fail("DanglingReference", "line '" + l.name + "' references an unknown bus");
        if (l.from == l.to) fail("SchemaError", "line '" + l.name + "' is a self-loop");
        if (!(l.susceptance > 0.0)) fail("SchemaError", "line '" + l.name + "' needs B > 0");
        if (l.capacity_min_mw > l.capacity_mw)
            fail("InfeasibleBounds", "line '" + l.name + "' has F^min > F^max");
        if (l.capacity_mw < 0.0) fail("InfeasibleBounds", "line '" + l.name + "' has F^max < 0");
        if (l.corridor_mult < 1.0)
            fail("SchemaError", "line '" + l.name + "' corridor multiplier must be >= 1");
    }
    for (const ConventionalGenerator& g : conventional) {
        if (g.bus < 0 || g.bus >= nb)
            fail("DanglingReference", "generator '" + g.name + "' references an unknown bus");
        if (g.p_max_mw < 0.0) fail("InfeasibleBounds", "generator '" + g.name + "' has P^max < 0");
        if (!(g.ramp_down_mw <= 0.0 && 0.0 <= g.ramp_up_mw))
            fail("InfeasibleBounds",
                 "generator '" + g.name + "' ramp limits must satisfy down <= 0 <= up");
    }
    for (const RenewableGenerator& r : renewables)
        if (r.bus < 0 || r.bus >= nb)
            fail("DanglingReference", "renewable '" + r.name + "' references an unknown bus");
}

void Network::validate(const std::vector<std::string>& channel_labels) const {
    validate();
    auto has_label = [&](const std::string& label) {
        return std::find(channel_labels.begin(), channel_labels.end(), label) !=
               channel_labels.end();
    };
    for (const Bus& b : buses)
        for (const std::string& ch : b.demand_channels)
            if (!has_label(ch))
                fail("UnboundChannel", "demand channel '" + ch + "' not present in scenario set");
    for (const RenewableGenerator& r : renewables)
        if (!has_label(r.profile_channel))
            fail("UnboundChannel",
                 "renewable channel '" + r.profile_channel + "' not present in scenario set");
}

}  // namespace scenagg
