// Scenario runner CLI: run/validate scenarios, recompute metrics from saved
// trajectories, and materialize the bundled case-study presets.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gfvcc/io.hpp"
#include "gfvcc/metrics.hpp"
#include "gfvcc/scenario.hpp"
#include "gfvcc/simulation.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDivergence = 2;

gfvcc::Json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gfvcc::ScenarioError("cannot open scenario file: " + path);
    try {
        return gfvcc::Json::parse(in);
    } catch (const gfvcc::Json::exception& e) {
        throw gfvcc::ScenarioError("scenario parse error in " + path + ": " + e.what());
    }
}

gfvcc::Scenario load_with_overrides(const std::string& path,
                                    const std::vector<std::string>& overrides) {
    gfvcc::Json doc = load_document(path);
    for (const auto& ov : overrides) gfvcc::apply_override(doc, ov);
    return gfvcc::load_scenario(doc);
}

std::string default_out_dir() {
    if (const char* env = std::getenv("GFVCC_OUT_DIR")) return env;
    return ".";
}

void ensure_writable(const fs::path& file, bool force) {
    if (fs::exists(file) && !force)
        throw gfvcc::ScenarioError("refusing to overwrite " + file.string() +
                                   " (use --force)");
}

struct RunOutcome {
    int code = kExitOk;
    std::string message;
};

RunOutcome run_one(const std::string& path, const std::vector<std::string>& overrides,
                   const std::string& out_dir, bool force) {
    const std::string stem = fs::path(path).stem().string();
    const fs::path traj_file = fs::path(out_dir) / (stem + "_trajectory.csv");
    const fs::path metrics_file = fs::path(out_dir) / (stem + "_metrics.txt");
    try {
        const gfvcc::Scenario sc = load_with_overrides(path, overrides);
        ensure_writable(traj_file, force);
        ensure_writable(metrics_file, force);
        fs::create_directories(out_dir);
        const gfvcc::SimulationResult res = gfvcc::run_scenario(sc);
        gfvcc::write_trajectory_csv(traj_file.string(), res.trajectory);
        gfvcc::write_metrics(metrics_file.string(), res.metrics);
        return {kExitOk, stem + ": ok (" + std::to_string(res.trajectory.rows.size()) +
                             " rows) -> " + traj_file.string()};
    } catch (const gfvcc::SimulationDiverged& e) {
        fs::create_directories(out_dir);
        gfvcc::write_trajectory_csv(traj_file.string(), e.trajectory);
        return {kExitDivergence,
                stem + ": diverged: " + e.what() + "; partial trajectory flushed to " +
                    traj_file.string()};
    } catch (const std::exception& e) {
        return {kExitValidation, stem + ": error: " + e.what()};
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gfvcc: grid-forming converter FRT scenario simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run scenarios and write trajectory + metrics");
    std::vector<std::string> run_paths;
    std::vector<std::string> overrides;
    std::string out_dir = default_out_dir();
    bool force = false;
    int jobs = 1;
    run->add_option("scenario", run_paths, "scenario file(s)")->required();
    run->add_option("--set", overrides, "override dotted.key=value before validation");
    run->add_option("-o,--out", out_dir, "output directory (env GFVCC_OUT_DIR)");
    run->add_flag("--force", force, "overwrite existing output files");
    run->add_option("-j,--jobs", jobs, "run independent scenarios in parallel")
        ->check(CLI::PositiveNumber);

    // validate
    auto* validate = app.add_subcommand("validate", "check a scenario without running it");
    std::string val_path;
    std::vector<std::string> val_overrides;
    validate->add_option("scenario", val_path, "scenario file")->required();
    validate->add_option("--set", val_overrides, "override dotted.key=value");

    // metrics
    auto* metrics = app.add_subcommand("metrics", "recompute metrics from a trajectory CSV");
    std::string m_traj, m_scenario, m_out;
    metrics->add_option("trajectory", m_traj, "trajectory CSV produced by run")->required();
    metrics->add_option("-s,--scenario", m_scenario, "scenario that produced it")->required();
    metrics->add_option("-o,--out", m_out, "write report here instead of stdout");

    // presets
    auto* presets = app.add_subcommand("presets", "write the bundled case-study scenarios");
    std::string p_dir = default_out_dir();
    bool p_force = false;
    bool p_list = false;
    presets->add_option("-o,--out", p_dir, "destination directory");
    presets->add_flag("--force", p_force, "overwrite existing files");
    presets->add_flag("--list", p_list, "list preset names without writing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*run) {
            std::vector<RunOutcome> outcomes(run_paths.size());
            if (jobs <= 1 || run_paths.size() <= 1) {
                for (std::size_t i = 0; i < run_paths.size(); ++i)
                    outcomes[i] = run_one(run_paths[i], overrides, out_dir, force);
            } else {
                std::atomic<std::size_t> cursor{0};
                auto worker = [&] {
                    for (std::size_t i = cursor.fetch_add(1); i < run_paths.size();
                         i = cursor.fetch_add(1))
                        outcomes[i] = run_one(run_paths[i], overrides, out_dir, force);
                };
                std::vector<std::thread> pool;
                const std::size_t n =
                    std::min<std::size_t>(static_cast<std::size_t>(jobs), run_paths.size());
                for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
                for (auto& th : pool) th.join();
            }
            int exit_code = kExitOk;
            for (const auto& oc : outcomes) {
                (oc.code == kExitOk ? std::cout : std::cerr) << oc.message << '\n';
                exit_code = std::max(exit_code, oc.code);
            }
            return exit_code;
        }

        if (*validate) {
            try {
                (void)load_with_overrides(val_path, val_overrides);
            } catch (const std::exception& e) {
                std::cerr << "invalid: " << e.what() << '\n';
                return kExitValidation;
            }
            std::cout << "ok\n";
            return kExitOk;
        }

        if (*metrics) {
            const gfvcc::Scenario sc = load_with_overrides(m_scenario, {});
            const gfvcc::Trajectory traj = gfvcc::read_trajectory_csv(m_traj);
            const gfvcc::MetricsReport rep = gfvcc::compute_metrics(traj, sc);
            if (m_out.empty())
                std::cout << gfvcc::metrics_to_string(rep);
            else
                gfvcc::write_metrics(m_out, rep);
            return kExitOk;
        }

        if (*presets) {
            for (const auto& [name, doc] : gfvcc::preset_scenarios()) {
                if (p_list) {
                    std::cout << name << '\n';
                    continue;
                }
                fs::create_directories(p_dir);
                const fs::path file = fs::path(p_dir) / (name + ".json");
                ensure_writable(file, p_force);
                std::ofstream out(file);
                out << doc.dump(2) << '\n';
                if (!out) throw std::runtime_error("write failed: " + file.string());
                std::cout << file.string() << '\n';
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
