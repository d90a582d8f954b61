// Regenerates the bundled data fixtures (network file and synthetic
// scenario CSVs). The committed files under data/ come from this tool.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>

#include "scenagg/io.hpp"

using namespace scenagg;

int main(int argc, char** argv) {
    CLI::App app{"regenerate the bundled garver6 fixtures"};
    std::string out_dir = "data";
    std::uint64_t seed = 20240101;
    std::vector<int> day_counts{60, 10, 365};
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--days", day_counts, "scenario set sizes to emit");
    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(out_dir);
        write_network(garver6_network(), out_dir + "/garver6.net");
        std::printf("wrote %s/garver6.net\n", out_dir.c_str());
        for (int days : day_counts) {
            const ScenarioSet s = synthetic_scenarios(garver6_synthetic_spec(days), seed);
            const std::string path =
                out_dir + "/garver6_scenarios_" + std::to_string(days) + "d.csv";
            write_scenario_csv(s, path);
            std::printf("wrote %s (%d days)\n", path.c_str(), days);
        }
        write_network(duo2_network(), out_dir + "/duo2.net");
        std::printf("wrote %s/duo2.net\n", out_dir.c_str());
        for (int days : {10, 60}) {
            const ScenarioSet s = synthetic_scenarios(duo2_synthetic_spec(days), seed);
            const std::string path =
                out_dir + "/duo2_scenarios_" + std::to_string(days) + "d.csv";
            write_scenario_csv(s, path);
            std::printf("wrote %s (%d days)\n", path.c_str(), days);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
