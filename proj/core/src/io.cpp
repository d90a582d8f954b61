#include "scenagg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace scenagg {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_value(const std::string& token, int line_no, int col_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size())
            fail("ParseError", "line " + std::to_string(line_no) + ", column " +
                                   std::to_string(col_no) + ": trailing characters in '" + token +
                                   "'");
        if (!std::isfinite(v))
            fail("NonFinite", "line " + std::to_string(line_no) + ", column " +
                                  std::to_string(col_no) + ": value is not finite");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail("ParseError", "line " + std::to_string(line_no) + ", column " +
                               std::to_string(col_no) + ": cannot parse '" + token + "'");
    }
}

}  // namespace

ScenarioSet load_scenarios(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) fail("ParseError", "empty scenario file");
    std::vector<std::string> header = split_csv(line);
    if (header.size() < 2) fail("ParseError", "header needs a timestamp and one channel");
    const std::vector<std::string> labels(header.begin() + 1, header.end());
    const std::size_t channels = labels.size();

    std::vector<std::vector<double>> hourly;  // one row per hour, channels wide
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> tokens = split_csv(line);
        if (tokens.size() != channels + 1)
            fail("NonRectangular", "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(channels + 1) + " fields, got " +
                                       std::to_string(tokens.size()));
        std::vector<double> row(channels);
        for (std::size_t c = 0; c < channels; ++c)
            row[c] = parse_value(tokens[c + 1], line_no, static_cast<int>(c + 2));
        hourly.push_back(std::move(row));
    }
    if (hourly.empty()) fail("ParseError", "scenario file has no data rows");
    if (hourly.size() % 24 != 0)
        fail("NonRectangular", "hour count " + std::to_string(hourly.size()) +
                                   " is not divisible by 24");

    const std::size_t days = hourly.size() / 24;
    std::vector<std::vector<double>> profiles(days,
                                              std::vector<double>(24 * channels, 0.0));
    for (std::size_t d = 0; d < days; ++d)
        for (int t = 0; t < 24; ++t)
            for (std::size_t c = 0; c < channels; ++c)
                profiles[d][c * 24 + t] = hourly[d * 24 + t][c];
    return make_scenario_set(profiles, {}, labels);
}

void write_scenario_csv(const ScenarioSet& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot open '" + path + "' for writing");
    out << "timestamp";
    for (const std::string& label : s.channel_labels()) out << "," << label;
    out << "\n";
    char buf[40];
    for (std::size_t d = 0; d < s.size(); ++d) {
        for (int t = 0; t < s.hours(); ++t) {
            out << d * s.hours() + t;
            for (int c = 0; c < s.channels(); ++c) {
                std::snprintf(buf, sizeof(buf), "%.17g", s.scenario(d).value(t, c));
                out << "," << buf;
            }
            out << "\n";
        }
    }
    if (!out) fail("IoFailure", "write to '" + path + "' failed");
}

namespace {

struct NetParser {
    std::string path;
    int line_no = 0;

    [[noreturn]] void die(const std::string& code, const std::string& msg) const {
        fail(code, path + ":" + std::to_string(line_no) + ": " + msg);
    }
};

}  // namespace

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open '" + path + "'");

    Network net;
    NetParser p{path};
    std::string section;
    bool have_buses = false, have_lines = false;
    bool version_seen = false;

    std::string line;
    while (std::getline(in, line)) {
        ++p.line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;

        if (first.front() == '[') {
            section = first;
            if (section == "[buses]") have_buses = true;
            else if (section == "[lines]") have_lines = true;
            else if (section != "[conventional]" && section != "[renewables]")
                p.die("SchemaError", "unknown section " + section);
            continue;
        }
        if (section.empty()) {
            if (first == "network") { ss >> net.name; continue; }
            if (first == "version") {
                int v = 0;
                ss >> v;
                if (v != 1) p.die("SchemaError", "unsupported schema version");
                version_seen = true;
                continue;
            }
            if (first == "sbase") { ss >> net.s_base_mva; continue; }
            if (first == "shed_cost") { ss >> net.shed_cost; continue; }
            p.die("SchemaError", "unexpected token '" + first + "' before any section");
        }
        if (section == "[buses]") {
            Bus b;
            b.name = first;
            std::string channels;
            if (ss >> channels && channels != "-") {
                std::istringstream cs(channels);
                std::string ch;
                while (std::getline(cs, ch, ','))
                    if (!ch.empty()) b.demand_channels.push_back(ch);
            }
            net.buses.push_back(std::move(b));
        } else if (section == "[lines]") {
            Line l;
            l.name = first;
            std::string from, to, kind;
            if (!(ss >> from >> to >> l.susceptance >> l.capacity_mw >> l.capacity_min_mw >>
                  l.cost_fix >> l.cost_var >> kind >> l.corridor_mult))
                p.die("SchemaError", "line record needs 10 fields");
            l.from = net.bus_index(from);
            l.to = net.bus_index(to);
            if (kind == "existing") l.existing = true;
            else if (kind == "candidate") l.existing = false;
            else p.die("SchemaError", "line kind is 'existing' or 'candidate'");
            net.lines.push_back(std::move(l));
        } else if (section == "[conventional]") {
            ConventionalGenerator g;
            g.name = first;
            std::string bus;
            if (!(ss >> bus >> g.p_max_mw >> g.cost_op >> g.ramp_up_mw >> g.ramp_down_mw))
                p.die("SchemaError", "conventional record needs 6 fields");
            g.bus = net.bus_index(bus);
            net.conventional.push_back(std::move(g));
        } else if (section == "[renewables]") {
            RenewableGenerator r;
            r.name = first;
            std::string bus;
            if (!(ss >> bus >> r.profile_channel))
                p.die("SchemaError", "renewable record needs 3 fields");
            r.bus = net.bus_index(bus);
            net.renewables.push_back(std::move(r));
        }
    }
    if (!version_seen) fail("SchemaError", path + ": missing 'version'");
    if (!have_buses) fail("SchemaError", path + ": missing [buses] section");
    if (!have_lines) fail("SchemaError", path + ": missing [lines] section");
    net.validate();
    return net;
}

void write_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot open '" + path + "' for writing");
    char buf[64];
    auto g = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return std::string(buf);
    };
    out << "network " << net.name << "\n";
    out << "version 1\n";
    out << "sbase " << g(net.s_base_mva) << "\n";
    out << "shed_cost " << g(net.shed_cost) << "\n\n";
    out << "[buses]\n";
    for (const Bus& b : net.buses) {
        out << b.name << " ";
        if (b.demand_channels.empty()) {
            out << "-";
        } else {
            for (std::size_t i = 0; i < b.demand_channels.size(); ++i)
                out << (i ? "," : "") << b.demand_channels[i];
        }
        out << "\n";
    }
    out << "\n[lines]\n";
    out << "# name from to susceptance capacity min_capacity cost_fix cost_var kind "
           "corridor_mult\n";
    for (const Line& l : net.lines)
        out << l.name << " " << net.buses[l.from].name << " " << net.buses[l.to].name << " "
            << g(l.susceptance) << " " << g(l.capacity_mw) << " " << g(l.capacity_min_mw) << " "
            << g(l.cost_fix) << " " << g(l.cost_var) << " "
            << (l.existing ? "existing" : "candidate") << " " << g(l.corridor_mult) << "\n";
    out << "\n[conventional]\n";
    out << "# name bus p_max cost_op ramp_up ramp_down\n";
    for (const ConventionalGenerator& cg : net.conventional)
        out << cg.name << " " << net.buses[cg.bus].name << " " << g(cg.p_max_mw) << " "
            << g(cg.cost_op) << " " << g(cg.ramp_up_mw) << " " << g(cg.ramp_down_mw) << "\n";
    out << "\n[renewables]\n";
    out << "# name bus channel\n";
    for (const RenewableGenerator& r : net.renewables)
        out << r.name << " " << net.buses[r.bus].name << " " << r.profile_channel << "\n";
    if (!out) fail("IoFailure", "write to '" + path + "' failed");
}

namespace {

using ordered_json = nlohmann::ordered_json;

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? " " : "") + names[i];
    return out;
}

std::string join_values(const std::vector<double>& values) {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6g", values[i]);
        out += (i ? " " : "") + std::string(buf);
    }
    return out;
}

}  // namespace

void write_report(const BenchmarkReport& r, const std::string& dir) {
    std::filesystem::create_directories(dir);

    // report.json carries everything reproducible; wall-clock timings are
    // confined to runtime.csv so identical runs produce identical bytes.
    ordered_json j;
    j["network"] = r.network_name;
    j["scenario_fingerprint"] = r.scenario_fingerprint;
    j["seed"] = r.seed;
    j["mip_gap"] = r.mip_gap;
    j["k_range"] = {r.k_min, r.k_max};
    j["baseline"] = {{"num_scenarios", r.full_num_scenarios},
                     {"objective", r.full_objective},
                     {"built_lines", r.full_built_lines},
                     {"capacities_mw", r.full_capacities_mw}};
    j["cells"] = ordered_json::array();
    for (const MethodCell& c : r.cells) {
        ordered_json jc;
        jc["method"] = c.method;
        jc["k"] = c.k;
        jc["status"] = c.status;
        jc["in_sample_objective"] = c.in_sample_objective;
        jc["in_sample_gap_pct"] = c.in_sample_gap_pct;
        jc["built_lines"] = c.built_lines;
        jc["capacities_mw"] = c.capacities_mw;
        jc["provenance"] = c.provenance;
        j["cells"].push_back(std::move(jc));
    }
    j["methods"] = ordered_json::array();
    for (const MethodSummary& ms : r.methods) {
        ordered_json jm;
        jm["method"] = ms.method;
        jm["optimal_k"] = ms.optimal_k;
        jm["in_sample_objective"] = ms.in_sample_objective;
        jm["oos_objective"] = ms.oos_objective;
        jm["oos_gap_pct"] = ms.oos_gap_pct;
        jm["built_lines"] = ms.built_lines;
        jm["capacities_mw"] = ms.capacities_mw;
        j["methods"].push_back(std::move(jm));
    }
    {
        std::ofstream out(dir + "/report.json");
        if (!out) fail("IoFailure", "cannot write report.json");
        out << j.dump(2) << "\n";
    }

    {
        std::ofstream out(dir + "/comparison.csv");
        if (!out) fail("IoFailure", "cannot write comparison.csv");
        out << "method,oos_gap_pct,built_lines,capacities_mw,num_repr\n";
        char buf[40];
        for (const MethodSummary& ms : r.methods) {
            std::snprintf(buf, sizeof(buf), "%.6g", ms.oos_gap_pct);
            out << ms.method << "," << buf << "," << join_names(ms.built_lines) << ","
                << join_values(ms.capacities_mw) << "," << ms.optimal_k << "\n";
        }
    }

    {
        std::ofstream out(dir + "/runtime.csv");
        if (!out) fail("IoFailure", "cannot write runtime.csv");
        out << "method,method_time_mean_s,method_time_sd_s,total_time_s\n";
        char buf[40];
        for (const MethodSummary& ms : r.methods) {
            out << ms.method;
            std::snprintf(buf, sizeof(buf), "%.6g", ms.method_time_mean);
            out << "," << buf;
            std::snprintf(buf, sizeof(buf), "%.6g", ms.method_time_sd);
            out << "," << buf;
            std::snprintf(buf, sizeof(buf), "%.6g", ms.total_time);
            out << "," << buf << "\n";
        }
    }

    {
        // Plot-ready relative objectives per (method, K).
        std::ofstream out(dir + "/insample_by_k.csv");
        if (!out) fail("IoFailure", "cannot write insample_by_k.csv");
        out << "method,k,status,in_sample_objective,in_sample_gap_pct,relative_objective\n";
        char buf[40];
        for (const MethodCell& c : r.cells) {
            out << c.method << "," << c.k << "," << c.status << ",";
            std::snprintf(buf, sizeof(buf), "%.10g", c.in_sample_objective);
            out << buf << ",";
            std::snprintf(buf, sizeof(buf), "%.6g", c.in_sample_gap_pct);
            out << buf << ",";
            std::snprintf(buf, sizeof(buf), "%.10g",
                          r.full_objective > 0.0 ? c.in_sample_objective / r.full_objective : 0.0);
            out << buf << "\n";
        }
    }
}

void write_sensitivity(const std::vector<SensitivityRow>& rows, const std::string& dir) {
    std::filesystem::create_directories(dir);
    char buf[40];
    {
        std::ofstream out(dir + "/sensitivity.csv");
        if (!out) fail("IoFailure", "cannot write sensitivity.csv");
        out << "load_level,seconds,nodes,objective,achieved_gap\n";
        for (const SensitivityRow& r : rows) {
            std::snprintf(buf, sizeof(buf), "%.4g", r.load_level);
            out << buf << ",";
            std::snprintf(buf, sizeof(buf), "%.6g", r.seconds);
            out << buf << "," << r.nodes << ",";
            std::snprintf(buf, sizeof(buf), "%.10g", r.objective);
            out << buf << ",";
            std::snprintf(buf, sizeof(buf), "%.6g", r.achieved_gap);
            out << buf << "\n";
        }
    }
    {
        std::ofstream out(dir + "/sensitivity_trajectory.csv");
        if (!out) fail("IoFailure", "cannot write sensitivity_trajectory.csv");
        out << "load_level,seconds,nodes,best_bound,incumbent,gap\n";
        for (const SensitivityRow& r : rows) {
            for (const BnbTrajectoryPoint& p : r.trajectory) {
                std::snprintf(buf, sizeof(buf), "%.4g", r.load_level);
                out << buf << ",";
                std::snprintf(buf, sizeof(buf), "%.6g", p.seconds);
                out << buf << "," << p.nodes << ",";
                std::snprintf(buf, sizeof(buf), "%.10g", p.best_bound);
                out << buf << ",";
                std::snprintf(buf, sizeof(buf), "%.10g", p.incumbent);
                out << buf << ",";
                std::snprintf(buf, sizeof(buf), "%.6g", p.gap);
                out << buf << "\n";
            }
        }
    }
}

}  // namespace scenagg
