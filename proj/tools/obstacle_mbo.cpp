// Command line front end. All logic lives in the library's cli layer so the
// subcommands stay directly testable.

#include "obmbo/cli.hpp"

#include <CLI11.hpp>

#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"Obstacle-constrained threshold dynamics on the periodic grid"};
    app.set_version_flag("--version", std::string(obmbo::cli::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Iterate a configured initial state");
    run_cmd->add_option("config", config_path, "JSON config file")->required();

    std::string invasion_config;
    auto* invasion_cmd =
        app.add_subcommand("invasion", "Grow randomly seeded clamped disks");
    invasion_cmd->add_option("config", invasion_config, "JSON config file")->required();

    std::string study_config;
    auto* study_cmd =
        app.add_subcommand("study", "Steady states of the three-disk geometry across h");
    study_cmd->add_option("config", study_config, "JSON config file")->required();

    std::vector<int> bench_sizes{256, 512, 1024, 2048};
    double bench_h = 1e-4;
    int bench_iters = 100;
    std::string bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "Time scheme steps per grid size");
    // long-only help here so --h stays available for the diffusion time
    bench_cmd->set_help_flag("--help", "Print this help message and exit");
    bench_cmd->add_option("--sizes", bench_sizes, "grid sides to time");
    bench_cmd->add_option("--h", bench_h, "diffusion time");
    bench_cmd->add_option("--iters", bench_iters, "timed iterations per size");
    bench_cmd->add_option("--out", bench_out, "CSV output path");

    std::string suite = "all";
    auto* verify_cmd = app.add_subcommand("verify", "Run oracle verification suites");
    verify_cmd->add_option("--suite", suite,
                           "minimizer | spectral | monotonicity | volume | all");

    std::string state_path, render_out, phi_path, psi_path;
    auto* render_cmd = app.add_subcommand("render", "State PGM with obstacle outlines");
    render_cmd->add_option("state", state_path, "phase state PGM")->required();
    render_cmd->add_option("out", render_out, "output PGM")->required();
    render_cmd->add_option("--phi", phi_path, "inner obstacle mask PGM");
    render_cmd->add_option("--psi", psi_path, "outer obstacle mask PGM");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // CLI11 reserves its own exit codes; fold usage errors into 2
        return code == 0 ? 0 : 2;
    }

    if (run_cmd->parsed()) return obmbo::cli::cmd_run(config_path);
    if (invasion_cmd->parsed()) return obmbo::cli::cmd_invasion(invasion_config);
    if (study_cmd->parsed()) return obmbo::cli::cmd_study(study_config);
    if (bench_cmd->parsed()) {
        return obmbo::cli::cmd_bench(bench_sizes, bench_h, bench_iters, bench_out);
    }
    if (verify_cmd->parsed()) return obmbo::cli::cmd_verify(suite);
    if (render_cmd->parsed()) {
        return obmbo::cli::cmd_render(state_path, render_out, phi_path, psi_path);
    }
    return 2;
}
