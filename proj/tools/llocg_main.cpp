// llocg: run, validate and list projection-free optimization experiments.
//
// Exit status: 0 all certifications passed, 1 a certification failed,
// 2 usage, configuration or I/O error.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "llocg/bench/config.hpp"
#include "llocg/bench/runner.hpp"
#include "llocg/errors.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCertificationFailure = 1;
constexpr int kUsageError = 2;

void print_report(const llocg::bench::SummaryReport& report, const llocg::bench::ExperimentConfig& cfg) {
    std::cout << "experiment " << report.name << " (" << to_string(cfg.solver) << ", " << cfg.seeds.size()
              << " seeds, " << report.seconds << " s)\n";
    for (const auto& s : report.seeds) {
        std::cout << "  seed " << s.seed << ": value " << s.final_value;
        if (s.final_gap) std::cout << ", gap " << *s.final_gap;
        if (s.final_regret) std::cout << ", regret " << *s.final_regret;
        if (s.regret_bound) std::cout << " (bound " << *s.regret_bound << ")";
        if (s.baseline_regret) std::cout << ", baseline regret " << *s.baseline_regret;
        std::cout << ", oracle calls " << s.oracle_calls << ", " << s.seconds << " s";
        for (const auto& [name, ok] : s.certified) std::cout << ", " << name << (ok ? " PASS" : " FAIL");
        std::cout << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Projection-free convex optimization over polytopes: experiment harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment config and write CSV traces");
    std::string run_path;
    unsigned jobs = 0;
    std::string schedule;
    std::string out_dir;
    run->add_option("config", run_path, "Experiment config (JSON)")->required();
    run->add_option("--jobs", jobs, "Worker threads (default: logical cores)")->check(CLI::Range(1u, 4096u));
    run->add_option("--radius-schedule", schedule, "Override the radius schedule")
        ->check(CLI::IsMember({"lemma", "algbox"}));
    run->add_option("--out", out_dir, "Output directory (default: config output_dir, then $LLOCG_OUT, then .)");

    auto* validate = app.add_subcommand("validate", "Check a config without running it");
    std::string validate_path;
    validate->add_option("config", validate_path, "Experiment config (JSON)")->required();

    app.add_subcommand("list", "List polytope families, objectives, streams, solvers and certifications");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsageError;
    }

    try {
        if (app.got_subcommand("list")) {
            std::cout << llocg::bench::list_catalog();
            return kPass;
        }
        if (app.got_subcommand("validate")) {
            const auto cfg = llocg::bench::load_experiment_config(validate_path);
            std::cout << "ok: " << cfg.name << " (" << to_string(cfg.solver) << ", " << cfg.seeds.size()
                      << " seeds)\n";
            return kPass;
        }

        const auto cfg = llocg::bench::load_experiment_config(run_path);
        llocg::bench::RunOptions options;
        options.jobs = jobs;
        if (!schedule.empty()) options.radius_schedule = llocg::parse_radius_schedule(schedule);
        if (!out_dir.empty()) {
            options.output_dir = out_dir;
        } else if (cfg.output_dir) {
            options.output_dir = *cfg.output_dir;
        } else if (const char* env = std::getenv("LLOCG_OUT"); env && *env) {
            options.output_dir = env;
        } else {
            options.output_dir = ".";
        }
        const auto report = llocg::bench::run_experiment(cfg, options);
        print_report(report, cfg);
        return report.all_certified() ? kPass : kCertificationFailure;
    } catch (const llocg::IoError& e) {
        std::cerr << "llocg: I/O error: " << e.what() << '\n';
    } catch (const llocg::ConfigError& e) {
        std::cerr << "llocg: invalid config: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "llocg: " << e.what() << '\n';
    }
    return kUsageError;
}
