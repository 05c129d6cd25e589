/// @file
/// Command entry points, exercised in process against configs written to a
/// scratch directory. These pin the exit code contract (0 ok, 1 runtime
/// failure, 2 bad config), the artifact layout, and rerun determinism.

#include "obmbo/cli.hpp"

#include "obmbo/grid.hpp"
#include "obmbo/pgm.hpp"

#include <doctest.h>
#include <stdexcept>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace obmbo;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_root() {
    const fs::path root = fs::temp_directory_path() / "obmbo_cli_tests";
    fs::create_directories(root);
    return root;
}

std::string write_config(const json& config, const std::string& name) {
    const fs::path path = scratch_root() / name;
    std::ofstream out(path);
    out << config.dump(2);
    REQUIRE(out.good());
    return path.string();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json run_config(const std::string& out_dir, const std::string& run_id) {
    json config;
    config["grid"] = {{"n", 64}};
    config["scheme"] = {{"h", 1e-3}, {"max_iters", 50}};
    config["initial"] = {{"type", "disks"},
                         {"centers", json::array({json::array({0.5, 0.5})})},
                         {"radius", 0.25}};
    config["obstacles"] = {
        {"phi",
         {{"type", "disks"},
          {"centers", json::array({json::array({0.5, 0.5})})},
          {"radius", 0.1}}},
        {"psi", {{"type", "none"}}}};
    config["output"] = {{"dir", out_dir}, {"run_id", run_id}, {"snapshot_stride", 10}};
    return config;
}

} // namespace

TEST_CASE("run command writes the full artifact set") {
    const fs::path dir = scratch_root() / "run_a";
    fs::remove_all(dir);
    const std::string cfg = write_config(run_config(dir.string(), "t1"), "run_a.json");
    REQUIRE(cli::cmd_run(cfg) == 0);

    REQUIRE(fs::exists(dir / "t1_final.pgm"));
    REQUIRE(fs::exists(dir / "t1_metrics.csv"));
    REQUIRE(fs::exists(dir / "t1_manifest.json"));
    REQUIRE(fs::exists(dir / "t1_iter000000.pgm")); // stride snapshot at iter 0

    const std::string metrics = slurp(dir / "t1_metrics.csv");
    CHECK(metrics.rfind("iter,area_fraction,energy,movement,flips\n", 0) == 0);

    std::ifstream min(dir / "t1_manifest.json");
    const json manifest = json::parse(min);
    CHECK(manifest.at("artifact_version").get<std::string>() == cli::kVersion);
    CHECK(manifest.at("h").get<double>() == 1e-3);
    CHECK(manifest.at("command").get<std::string>() == "run");
    CHECK(manifest.at("rng").at("algorithm").get<std::string>() ==
          "mt19937_64-canonical53");
    for (const json& name : manifest.at("outputs")) {
        CHECK(fs::exists(dir / name.get<std::string>()));
    }

    // the shrink toward the clamped core must settle within the iteration cap
    CHECK(manifest.at("termination").get<std::string>() == "steady_state");
    CHECK(manifest.at("area_fraction_final").get<double>() > 0.0);
}

TEST_CASE("identical configs rerun to identical artifacts") {
    const fs::path dir_a = scratch_root() / "rerun_a";
    const fs::path dir_b = scratch_root() / "rerun_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    REQUIRE(cli::cmd_run(write_config(run_config(dir_a.string(), "t"), "rr_a.json")) == 0);
    REQUIRE(cli::cmd_run(write_config(run_config(dir_b.string(), "t"), "rr_b.json")) == 0);
    CHECK(slurp(dir_a / "t_metrics.csv") == slurp(dir_b / "t_metrics.csv"));
    CHECK(slurp(dir_a / "t_final.pgm") == slurp(dir_b / "t_final.pgm"));
}

TEST_CASE("bad run configs exit with code two") {
    const fs::path dir = scratch_root() / "bad";

    json overlap = run_config(dir.string(), "bad");
    overlap["obstacles"]["psi"] = {{"type", "disks"},
                                   {"centers", json::array({json::array({0.5, 0.5})})},
                                   {"radius", 0.05}};
    CHECK(cli::cmd_run(write_config(overlap, "bad_overlap.json")) == 2);

    json nonpositive_h = run_config(dir.string(), "bad");
    nonpositive_h["scheme"]["h"] = 0.0;
    CHECK(cli::cmd_run(write_config(nonpositive_h, "bad_h.json")) == 2);

    json missing_h = run_config(dir.string(), "bad");
    missing_h["scheme"].erase("h");
    CHECK(cli::cmd_run(write_config(missing_h, "bad_missing_h.json")) == 2);

    json unknown_key = run_config(dir.string(), "bad");
    unknown_key["scheme"]["step"] = 3;
    CHECK(cli::cmd_run(write_config(unknown_key, "bad_key.json")) == 2);

    json missing_output = run_config(dir.string(), "bad");
    missing_output.erase("output");
    CHECK(cli::cmd_run(write_config(missing_output, "bad_out.json")) == 2);

    json bad_initial = run_config(dir.string(), "bad");
    bad_initial["initial"] = {{"type", "squares"}};
    CHECK(cli::cmd_run(write_config(bad_initial, "bad_init.json")) == 2);

    json has_experiment = run_config(dir.string(), "bad");
    has_experiment["experiment"] = {{"type", "invasion"}};
    CHECK(cli::cmd_run(write_config(has_experiment, "bad_exp.json")) == 2);

    CHECK(cli::cmd_run((scratch_root() / "no_such_config.json").string()) == 2);

    const fs::path garbage = scratch_root() / "garbage.json";
    std::ofstream(garbage) << "{ not json";
    CHECK(cli::cmd_run(garbage.string()) == 2);
}

TEST_CASE("volume target threads through the run command") {
    const fs::path dir = scratch_root() / "volume";
    fs::remove_all(dir);
    json config;
    config["grid"] = {{"n", 32}};
    config["scheme"] = {{"h", 1e-3}, {"max_iters", 300}, {"volume_target", 120}};
    config["initial"] = {{"type", "disks"},
                         {"centers", json::array({json::array({0.5, 0.5})})},
                         {"radius", 0.2}};
    config["obstacles"] = {{"phi", {{"type", "none"}}}, {"psi", {{"type", "none"}}}};
    config["output"] = {{"dir", dir.string()}, {"run_id", "vol"}};
    REQUIRE(cli::cmd_run(write_config(config, "volume.json")) == 0);
    const PhaseField final_state = load_phase_pgm((dir / "vol_final.pgm").string());
    CHECK(count_plus(final_state) == 120);
}

TEST_CASE("render overlays obstacle outlines in gray") {
    const fs::path dir = scratch_root() / "render";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const GridGeometry g(32);
    const std::vector<TorusPoint> center{{0.5, 0.5}};
    save_phase_pgm(phase_from_mask(g, rasterize_disks(center, 0.3, g)),
                   (dir / "state.pgm").string());
    save_mask_pgm(rasterize_disks(center, 0.15, g), g, (dir / "phi.pgm").string());

    REQUIRE(cli::cmd_render((dir / "state.pgm").string(), (dir / "out.pgm").string(),
                            (dir / "phi.pgm").string()) == 0);
    const PgmImage img = load_pgm((dir / "out.pgm").string());
    bool has_gray = false, has_white = false, has_black = false;
    for (std::uint8_t p : img.pixels) {
        if (p == 128) has_gray = true;
        if (p == 255) has_white = true;
        if (p == 0) has_black = true;
    }
    CHECK(has_gray);
    CHECK(has_white);
    CHECK(has_black);

    // mismatched mask grid is a configuration error
    const GridGeometry g16(16);
    save_mask_pgm(rasterize_disks(center, 0.2, g16), g16, (dir / "phi16.pgm").string());
    CHECK(cli::cmd_render((dir / "state.pgm").string(), (dir / "out2.pgm").string(),
                          (dir / "phi16.pgm").string()) == 2);

    // truncated input is a runtime failure
    std::ofstream(dir / "trunc.pgm", std::ios::binary) << "P5\n32 32\n255\nab";
    CHECK(cli::cmd_render((dir / "trunc.pgm").string(),
                          (dir / "out3.pgm").string()) == 1);
}

TEST_CASE("bench command writes its table") {
    const fs::path dir = scratch_root() / "bench";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string csv_path = (dir / "bench.csv").string();
    REQUIRE(cli::cmd_bench({16, 32}, 1e-3, 2, csv_path) == 0);
    const std::string csv = slurp(csv_path);
    CHECK(csv.rfind("n,cells,seconds_per_iter\n", 0) == 0);
    CHECK(csv.find("\n16,256,") != std::string::npos);
    CHECK(csv.find("\n32,1024,") != std::string::npos);

    CHECK(cli::cmd_bench({}, 1e-3, 2, "") == 2);
    CHECK(cli::cmd_bench({1}, 1e-3, 2, "") == 2);
    CHECK(cli::cmd_bench({16}, 0.0, 2, "") == 2);
    CHECK(cli::cmd_bench({16}, 1e-3, 0, "") == 2);
}

TEST_CASE("verify command reports suite status through its exit code") {
    CHECK(cli::cmd_verify("volume") == 0);
    CHECK(cli::cmd_verify("no-such-suite") == 2);
}

TEST_CASE("worker thread count comes from the environment") {
    unsetenv(cli::kThreadsEnvVar);
    CHECK(cli::worker_threads() == 1);
    setenv(cli::kThreadsEnvVar, "3", 1);
    CHECK(cli::worker_threads() == 3);
    setenv(cli::kThreadsEnvVar, "0", 1);
    CHECK(cli::worker_threads() == 1);
    setenv(cli::kThreadsEnvVar, "junk", 1);
    CHECK(cli::worker_threads() == 1);
    setenv(cli::kThreadsEnvVar, "100", 1);
    CHECK(cli::worker_threads() == 64);
    unsetenv(cli::kThreadsEnvVar);
}

TEST_CASE("study command emits one row per h value") {
    const fs::path dir = scratch_root() / "study";
    fs::remove_all(dir);
    json config;
    config["grid"] = {{"n", 128}};
    config["experiment"] = {{"type", "study"},
                            {"h_values", json::array({5e-4})},
                            {"max_iters", 2000}};
    config["output"] = {{"dir", dir.string()}, {"run_id", "st"}};
    REQUIRE(cli::cmd_study(write_config(config, "study.json")) == 0);

    const std::string csv = slurp(dir / "st_study.csv");
    CHECK(csv.rfind("h,iterations,components,hull_error,area_fraction_final\n", 0) == 0);

    std::ifstream min(dir / "st_manifest.json");
    const json manifest = json::parse(min);
    REQUIRE(manifest.at("rows").size() == 1);
    CHECK(manifest.at("rows")[0].at("h").get<double>() == 5e-4);
    CHECK(manifest.at("rows")[0].at("components").get<int>() >= 1);
    CHECK(manifest.at("hull_area_analytic").get<double>() > 0.0);

    // a scheme section is the run command's business
    json bad = config;
    bad["scheme"] = {{"h", 1e-3}};
    CHECK(cli::cmd_study(write_config(bad, "study_bad.json")) == 2);
}

TEST_CASE("invasion command resolves its defaults into the manifest") {
    const fs::path dir = scratch_root() / "invasion";
    fs::remove_all(dir);
    json config;
    config["grid"] = {{"n", 128}};
    config["experiment"] = {{"type", "invasion"},
                            {"a_syst", 50.0},
                            {"concentration", 0.3},
                            {"seed", 7}};
    config["output"] = {{"dir", dir.string()}, {"run_id", "inv"}};
    REQUIRE(cli::cmd_invasion(write_config(config, "invasion.json")) == 0);

    REQUIRE(fs::exists(dir / "inv_final.pgm"));
    REQUIRE(fs::exists(dir / "inv_phi.pgm"));
    REQUIRE(fs::exists(dir / "inv_metrics.csv"));

    std::ifstream min(dir / "inv_manifest.json");
    const json manifest = json::parse(min);
    CHECK(manifest.at("h").get<double>() > 0.0);
    CHECK(manifest.at("disk_count").get<int>() == 15);
    CHECK(manifest.at("padding_width").get<int>() > 0);
    CHECK(manifest.at("obstacle_fraction").get<double>() > 0.0);
    CHECK(manifest.at("rng").at("seed").get<std::uint64_t>() == 7);

    // explicit initial states are rejected here
    json bad = config;
    bad["initial"] = {{"type", "constant"}, {"value", 1}};
    CHECK(cli::cmd_invasion(write_config(bad, "invasion_bad.json")) == 2);
}

TEST_CASE("metrics serialization marks unrecorded energies") {
    GridGeometry g(16);
    SchemeConfig cfg;
    cfg.h = 1e-3;
    cfg.max_iters = 1;
    cfg.record_energy = false;
    const ObstacleSet none(g);
    const auto [state, record] = run(PhaseField(g, static_cast<std::int8_t>(1)),
                                     none, cfg);
    const std::string csv = cli::metrics_csv(record);
    CHECK(csv.find(",nan,nan,") != std::string::npos);
}
