#include "obmbo/cli.hpp"

#include "obmbo/energy.hpp"
#include "obmbo/experiments.hpp"
#include "obmbo/graph.hpp"
#include "obmbo/pgm.hpp"
#include "obmbo/rng.hpp"
#include "obmbo/verify.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

namespace obmbo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
        }
    }
}

const json& require_section(const json& root, const char* name) {
    if (!root.contains(name)) {
        throw ConfigError(std::string("missing config section '") + name + "'");
    }
    if (!root.at(name).is_object()) {
        throw ConfigError(std::string("config section '") + name + "' must be an object");
    }
    return root.at(name);
}

void forbid_section(const json& root, const char* name, const char* command) {
    if (root.contains(name)) {
        throw ConfigError(std::string("section '") + name + "' does not apply to " +
                          command);
    }
}

template <typename T>
T get_field(const json& obj, const char* where, const char* key) {
    if (!obj.contains(key)) {
        throw ConfigError(std::string("missing '") + key + "' in " + where);
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "' in " + where);
    }
}

template <typename T>
T get_field_or(const json& obj, const char* where, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "' in " + where);
    }
}

GridGeometry parse_grid(const json& root) {
    const json& grid = require_section(root, "grid");
    reject_unknown_keys(grid, "grid", {"n"});
    const int n = get_field<int>(grid, "grid", "n");
    if (n < 2) throw ConfigError("grid.n must be at least 2");
    return GridGeometry(n);
}

SchemeConfig parse_scheme(const json& root, bool h_required) {
    const json& scheme = require_section(root, "scheme");
    reject_unknown_keys(scheme, "scheme",
                        {"h", "max_iters", "volume_target", "record_energy"});
    SchemeConfig cfg;
    if (h_required || scheme.contains("h")) {
        cfg.h = get_field<double>(scheme, "scheme", "h");
        if (!(cfg.h > 0.0)) throw ConfigError("scheme.h must be positive");
    } else {
        cfg.h = 0.0; // resolved later by the experiment
    }
    cfg.max_iters = get_field_or<int>(scheme, "scheme", "max_iters", 1000);
    if (cfg.max_iters < 1) throw ConfigError("scheme.max_iters must be at least 1");
    cfg.record_energy = get_field_or<bool>(scheme, "scheme", "record_energy", true);
    if (scheme.contains("volume_target")) {
        const auto v = get_field<std::int64_t>(scheme, "scheme", "volume_target");
        if (v < 0) throw ConfigError("scheme.volume_target must be nonnegative");
        cfg.volume_target = v;
    }
    return cfg;
}

std::vector<TorusPoint> parse_centers(const json& obj, const char* where) {
    if (!obj.contains("centers") || !obj.at("centers").is_array() ||
        obj.at("centers").empty()) {
        throw ConfigError(std::string("'centers' in ") + where +
                          " must be a nonempty array of [x, y] pairs");
    }
    std::vector<TorusPoint> centers;
    for (const json& c : obj.at("centers")) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
            throw ConfigError(std::string("'centers' entries in ") + where +
                              " must be [x, y] pairs");
        }
        centers.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return centers;
}

struct InitialSpec {
    PhaseField state;
    std::optional<std::uint64_t> seed;
};

InitialSpec parse_initial(const json& root, GridGeometry geom) {
    const json& init = require_section(root, "initial");
    const std::string type = get_field<std::string>(init, "initial", "type");
    InitialSpec spec{PhaseField(geom, static_cast<std::int8_t>(-1)), std::nullopt};
    if (type == "constant") {
        reject_unknown_keys(init, "initial", {"type", "value"});
        const int value = get_field<int>(init, "initial", "value");
        if (value != 1 && value != -1) {
            throw ConfigError("initial.value must be 1 or -1");
        }
        spec.state = PhaseField(geom, static_cast<std::int8_t>(value));
    } else if (type == "disks") {
        reject_unknown_keys(init, "initial", {"type", "centers", "radius"});
        const double radius = get_field<double>(init, "initial", "radius");
        spec.state = phase_from_mask(
            geom, rasterize_disks(parse_centers(init, "initial"), radius, geom));
    } else if (type == "random_disks") {
        reject_unknown_keys(init, "initial", {"type", "count", "radius", "seed"});
        const int count = get_field<int>(init, "initial", "count");
        if (count < 1) throw ConfigError("initial.count must be at least 1");
        const double radius = get_field<double>(init, "initial", "radius");
        const auto seed = get_field_or<std::uint64_t>(init, "initial", "seed", 1);
        Rng rng(seed);
        std::vector<TorusPoint> centers(count);
        for (auto& c : centers) {
            c.x = rng.uniform();
            c.y = rng.uniform();
        }
        spec.state = phase_from_mask(geom, rasterize_disks(centers, radius, geom));
        spec.seed = seed;
    } else if (type == "band") {
        reject_unknown_keys(init, "initial", {"type", "x0", "x1"});
        const double x0 = get_field<double>(init, "initial", "x0");
        const double x1 = get_field<double>(init, "initial", "x1");
        spec.state = phase_from_mask(geom, band_mask(geom, x0, x1));
    } else if (type == "file") {
        reject_unknown_keys(init, "initial", {"type", "path"});
        const auto path = get_field<std::string>(init, "initial", "path");
        spec.state = load_phase_pgm(path);
        if (!(spec.state.geom == geom)) {
            throw ConfigError("initial state in '" + path + "' does not match grid.n");
        }
    } else {
        throw ConfigError("unknown initial.type '" + type + "'");
    }
    return spec;
}

std::vector<std::uint8_t> parse_obstacle_mask(const json& section, const char* which,
                                              GridGeometry geom,
                                              const PhaseField& initial_state) {
    const std::string where = std::string("obstacles.") + which;
    if (!section.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    const std::string type = get_field<std::string>(section, where.c_str(), "type");
    if (type == "none") {
        reject_unknown_keys(section, where.c_str(), {"type"});
        return std::vector<std::uint8_t>(geom.cells(), 0);
    }
    if (type == "disks") {
        reject_unknown_keys(section, where.c_str(), {"type", "centers", "radius"});
        const double radius = get_field<double>(section, where.c_str(), "radius");
        return rasterize_disks(parse_centers(section, where.c_str()), radius, geom);
    }
    if (type == "file") {
        reject_unknown_keys(section, where.c_str(), {"type", "path"});
        const auto path = get_field<std::string>(section, where.c_str(), "path");
        GridGeometry file_geom;
        auto mask = load_mask_pgm(path, file_geom);
        if (!(file_geom == geom)) {
            throw ConfigError("mask in '" + path + "' does not match grid.n");
        }
        return mask;
    }
    if (type == "initial" && std::string(which) == "phi") {
        reject_unknown_keys(section, where.c_str(), {"type"});
        std::vector<std::uint8_t> mask(geom.cells(), 0);
        for (std::size_t i = 0; i < mask.size(); ++i) {
            mask[i] = initial_state.values[i] > 0 ? 1 : 0;
        }
        return mask;
    }
    if (type == "frame" && std::string(which) == "psi") {
        reject_unknown_keys(section, where.c_str(), {"type", "width_cells"});
        const int width = get_field<int>(section, where.c_str(), "width_cells");
        return frame_mask(geom, width);
    }
    throw ConfigError("unknown " + where + ".type '" + type + "'");
}

ObstacleSet parse_obstacles(const json& root, GridGeometry geom,
                            const PhaseField& initial_state) {
    const json& obst = require_section(root, "obstacles");
    reject_unknown_keys(obst, "obstacles", {"phi", "psi"});
    if (!obst.contains("phi") || !obst.contains("psi")) {
        throw ConfigError("obstacles must define both 'phi' and 'psi'");
    }
    auto phi = parse_obstacle_mask(obst.at("phi"), "phi", geom, initial_state);
    auto psi = parse_obstacle_mask(obst.at("psi"), "psi", geom, initial_state);
    try {
        return ObstacleSet(geom, std::move(phi), std::move(psi));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what()); // "obstacles overlap"
    }
}

struct OutputSpec {
    fs::path dir;
    std::string run_id;
    int snapshot_stride = 0;
};

OutputSpec parse_output(const json& root) {
    const json& out = require_section(root, "output");
    reject_unknown_keys(out, "output", {"dir", "run_id", "snapshot_stride"});
    OutputSpec spec;
    spec.dir = get_field<std::string>(out, "output", "dir");
    spec.run_id = get_field_or<std::string>(out, "output", "run_id", "run");
    if (spec.run_id.empty() || spec.run_id.find('/') != std::string::npos) {
        throw ConfigError("output.run_id must be a nonempty name without slashes");
    }
    spec.snapshot_stride = get_field_or<int>(out, "output", "snapshot_stride", 0);
    if (spec.snapshot_stride < 0) {
        throw ConfigError("output.snapshot_stride must be nonnegative");
    }
    return spec;
}

std::string snapshot_name(const std::string& run_id, int iter) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_iter%06d.pgm", iter);
    return run_id + buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

json manifest_skeleton(const char* command, const std::string& config_path,
                       const json& config_echo) {
    json m;
    m["artifact_version"] = kVersion;
    m["command"] = command;
    m["config_path"] = config_path;
    m["config"] = config_echo;
    m["rng"] = {{"algorithm", Rng::algorithm()}, {"seed", nullptr}};
    return m;
}

void finish_manifest(json& m, const OutputSpec& out, std::vector<std::string> files,
                     const std::string& started) {
    m["outputs"] = files;
    m["started_utc"] = started;
    m["finished_utc"] = utc_now();
    write_text(out.dir / (out.run_id + "_manifest.json"), m.dump(2) + "\n");
}

int guarded_execute(const char* command, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << command << ": config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << command << ": config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << command << ": error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

std::string metrics_csv(const RunRecord& record) {
    std::string csv = "iter,area_fraction,energy,movement,flips\n";
    for (int k = 0; k < record.iterations_run; ++k) {
        csv += std::to_string(k + 1);
        csv += ',';
        csv += fmt17(record.area_fraction[k]);
        csv += ',';
        csv += record.config.record_energy ? fmt17(record.energy[k]) : "nan";
        csv += ',';
        csv += record.config.record_energy ? fmt17(record.movement[k]) : "nan";
        csv += ',';
        csv += std::to_string(record.flips[k]);
        csv += '\n';
    }
    return csv;
}

int worker_threads() {
    const char* raw = std::getenv(kThreadsEnvVar);
    if (!raw) return 1;
    const int v = std::atoi(raw);
    if (v < 1) return 1;
    return std::min(v, 64);
}

int cmd_run(const std::string& config_path) {
    return guarded_execute("run", [&]() {
        const std::string started = utc_now();
        const json root = load_json(config_path);
        reject_unknown_keys(root, "config",
                            {"grid", "scheme", "initial", "obstacles", "output"});
        forbid_section(root, "experiment", "run (use the invasion or study command)");
        const GridGeometry geom = parse_grid(root);
        const SchemeConfig scheme = parse_scheme(root, true);
        const InitialSpec initial = parse_initial(root, geom);
        const ObstacleSet obs = parse_obstacles(root, geom, initial.state);
        const OutputSpec out = parse_output(root);

        fs::create_directories(out.dir);
        std::vector<std::string> files;
        const SnapshotFn snap = [&](int iter, const PhaseField& s) {
            const std::string name = snapshot_name(out.run_id, iter);
            save_phase_pgm(s, (out.dir / name).string());
            files.push_back(name);
        };

        auto [final_state, record] = run(initial.state, obs, scheme,
                                         out.snapshot_stride, snap);
        if (initial.seed) record.seed = *initial.seed;

        save_phase_pgm(final_state, (out.dir / (out.run_id + "_final.pgm")).string());
        files.push_back(out.run_id + "_final.pgm");
        write_text(out.dir / (out.run_id + "_metrics.csv"), metrics_csv(record));
        files.push_back(out.run_id + "_metrics.csv");

        json m = manifest_skeleton("run", config_path, root);
        if (initial.seed) m["rng"]["seed"] = *initial.seed;
        m["grid"] = {{"n", geom.n}, {"cells", geom.cells()}};
        m["h"] = scheme.h;
        m["iterations"] = record.iterations_run;
        m["termination"] = to_string(record.termination);
        m["area_fraction_final"] = record.area_fraction.back();
        files.push_back(out.run_id + "_manifest.json");
        finish_manifest(m, out, files, started);

        std::cout << "run: " << record.iterations_run << " iterations, "
                  << to_string(record.termination) << ", final area fraction "
                  << fmt17(record.area_fraction.back()) << "\n";
        return 0;
    });
}

int cmd_invasion(const std::string& config_path) {
    return guarded_execute("invasion", [&]() {
        const std::string started = utc_now();
        const json root = load_json(config_path);
        reject_unknown_keys(root, "config", {"grid", "scheme", "experiment", "output"});
        forbid_section(root, "initial", "invasion (seed disks are sampled)");
        forbid_section(root, "obstacles", "invasion (obstacles are derived)");
        const GridGeometry geom = parse_grid(root);
        SchemeConfig scheme{0.0, 4000, std::nullopt, true};
        if (root.contains("scheme")) {
            scheme = parse_scheme(root, false);
            if (scheme.volume_target) {
                throw ConfigError("invasion does not take scheme.volume_target");
            }
        }
        const json& exp = require_section(root, "experiment");
        reject_unknown_keys(exp, "experiment",
                            {"type", "a_syst", "concentration", "seed", "padding_width"});
        if (get_field<std::string>(exp, "experiment", "type") != "invasion") {
            throw ConfigError("experiment.type must be 'invasion' for this command");
        }
        InvasionConfig inv;
        inv.a_syst = get_field<double>(exp, "experiment", "a_syst");
        inv.concentration = get_field<double>(exp, "experiment", "concentration");
        inv.seed = get_field_or<std::uint64_t>(exp, "experiment", "seed", 1);
        inv.padding_width = get_field_or<int>(exp, "experiment", "padding_width", -1);
        inv.n = geom.n;
        inv.h = scheme.h; // 0 means derive from the disk radius
        inv.max_iters = scheme.max_iters;
        inv.record_energy = scheme.record_energy;
        if (!(inv.a_syst > 0.0)) throw ConfigError("experiment.a_syst must be positive");
        if (!(inv.concentration > 0.0) || inv.concentration >= 1.0) {
            throw ConfigError("experiment.concentration must lie in (0, 1)");
        }
        const OutputSpec out = parse_output(root);

        fs::create_directories(out.dir);
        std::vector<std::string> files;
        const SnapshotFn snap = [&](int iter, const PhaseField& s) {
            const std::string name = snapshot_name(out.run_id, iter);
            save_phase_pgm(s, (out.dir / name).string());
            files.push_back(name);
        };

        const InvasionResult result = invasion_run(inv, out.snapshot_stride, snap);

        save_phase_pgm(result.final_state,
                       (out.dir / (out.run_id + "_final.pgm")).string());
        files.push_back(out.run_id + "_final.pgm");
        save_mask_pgm(result.obstacles.phi, geom,
                      (out.dir / (out.run_id + "_phi.pgm")).string());
        files.push_back(out.run_id + "_phi.pgm");
        write_text(out.dir / (out.run_id + "_metrics.csv"), metrics_csv(result.record));
        files.push_back(out.run_id + "_metrics.csv");

        json m = manifest_skeleton("invasion", config_path, root);
        m["rng"]["seed"] = inv.seed;
        m["grid"] = {{"n", geom.n}, {"cells", geom.cells()}};
        m["h"] = inv.resolved_h();
        m["disk_radius"] = inv.disk_radius();
        m["disk_count"] = inv.disk_count();
        m["padding_width"] = inv.resolved_padding(inv.resolved_h());
        m["obstacle_fraction"] = result.obstacle_fraction;
        m["iterations"] = result.record.iterations_run;
        m["termination"] = to_string(result.record.termination);
        m["area_fraction_final"] = result.record.area_fraction.back();
        files.push_back(out.run_id + "_manifest.json");
        finish_manifest(m, out, files, started);

        std::cout << "invasion: " << result.record.iterations_run << " iterations, "
                  << to_string(result.record.termination) << ", final area fraction "
                  << fmt17(result.record.area_fraction.back()) << "\n";
        return 0;
    });
}

int cmd_study(const std::string& config_path) {
    return guarded_execute("study", [&]() {
        const std::string started = utc_now();
        const json root = load_json(config_path);
        reject_unknown_keys(root, "config", {"grid", "experiment", "output"});
        forbid_section(root, "scheme", "study (h values live in the experiment section)");
        forbid_section(root, "initial", "study (the disk geometry is fixed)");
        forbid_section(root, "obstacles", "study (obstacles are the seed disks)");
        const GridGeometry geom = parse_grid(root);
        const json& exp = require_section(root, "experiment");
        reject_unknown_keys(exp, "experiment",
                            {"type", "h_values", "gap", "radius", "max_iters"});
        if (get_field<std::string>(exp, "experiment", "type") != "study") {
            throw ConfigError("experiment.type must be 'study' for this command");
        }
        SteadyStateStudyConfig study;
        study.n = geom.n;
        if (!exp.contains("h_values") || !exp.at("h_values").is_array() ||
            exp.at("h_values").empty()) {
            throw ConfigError("experiment.h_values must be a nonempty array");
        }
        for (const json& v : exp.at("h_values")) {
            if (!v.is_number() || !(v.get<double>() > 0.0)) {
                throw ConfigError("experiment.h_values entries must be positive numbers");
            }
            study.h_values.push_back(v.get<double>());
        }
        study.geometry.gap = get_field_or<double>(exp, "experiment", "gap",
                                                  study.geometry.gap);
        study.geometry.radius = get_field_or<double>(exp, "experiment", "radius",
                                                     study.geometry.radius);
        if (!(study.geometry.gap > 0.0) || !(study.geometry.radius > 0.0)) {
            throw ConfigError("experiment gap and radius must be positive");
        }
        study.max_iters = get_field_or<int>(exp, "experiment", "max_iters", 4000);
        if (study.max_iters < 1) {
            throw ConfigError("experiment.max_iters must be at least 1");
        }
        const OutputSpec out = parse_output(root);

        fs::create_directories(out.dir);
        const std::vector<StudyRow> rows = steady_state_study(study, worker_threads());

        std::string csv = "h,iterations,components,hull_error,area_fraction_final\n";
        for (const StudyRow& row : rows) {
            csv += fmt17(row.h) + "," + std::to_string(row.iterations) + "," +
                   std::to_string(row.components) + "," + fmt17(row.hull_error) + "," +
                   fmt17(row.area_fraction_final) + "\n";
        }
        std::vector<std::string> files;
        write_text(out.dir / (out.run_id + "_study.csv"), csv);
        files.push_back(out.run_id + "_study.csv");

        json m = manifest_skeleton("study", config_path, root);
        m["grid"] = {{"n", geom.n}, {"cells", geom.cells()}};
        m["hull_area_analytic"] = study.geometry.hull_area();
        m["threads"] = worker_threads();
        json jrows = json::array();
        for (const StudyRow& row : rows) {
            jrows.push_back({{"h", row.h},
                             {"iterations", row.iterations},
                             {"termination", to_string(row.termination)},
                             {"components", row.components},
                             {"hull_error", row.hull_error},
                             {"area_fraction_final", row.area_fraction_final}});
        }
        m["rows"] = jrows;
        files.push_back(out.run_id + "_manifest.json");
        finish_manifest(m, out, files, started);

        for (const StudyRow& row : rows) {
            std::cout << "study: h=" << fmt17(row.h) << " iterations=" << row.iterations
                      << " components=" << row.components
                      << " hull_error=" << fmt17(row.hull_error) << "\n";
        }
        return 0;
    });
}

int cmd_bench(const std::vector<int>& sizes, double h, int iters,
              const std::string& out_csv) {
    return guarded_execute("bench", [&]() {
        if (sizes.empty()) throw ConfigError("bench needs at least one grid side");
        for (int n : sizes) {
            if (n < 2) throw ConfigError("bench sizes must be at least 2");
        }
        if (!(h > 0.0)) throw ConfigError("bench h must be positive");
        if (iters < 1) throw ConfigError("bench iters must be at least 1");

        const std::vector<BenchRow> rows = bench(sizes, h, iters);
        std::string csv = "n,cells,seconds_per_iter\n";
        for (const BenchRow& row : rows) {
            csv += std::to_string(row.n) + "," + std::to_string(row.cells) + "," +
                   fmt17(row.seconds_per_iter) + "\n";
            std::cout << "bench: n=" << row.n << " cells=" << row.cells
                      << " seconds_per_iter=" << fmt17(row.seconds_per_iter) << "\n";
        }
        if (!out_csv.empty()) {
            write_text(out_csv, csv);
        }
        return 0;
    });
}

int cmd_verify(const std::string& suite) {
    return guarded_execute("verify", [&]() {
        std::vector<SuiteResult> results;
        if (suite == "minimizer" || suite == "all") {
            results.push_back(verify_minimizer_suite());
        }
        if (suite == "spectral" || suite == "all") {
            results.push_back(verify_spectral_suite({2, 4, 8, 16, 32, 64}));
        }
        if (suite == "monotonicity" || suite == "all") {
            results.push_back(verify_monotonicity_suite());
        }
        if (suite == "volume" || suite == "all") {
            results.push_back(verify_volume_suite());
        }
        if (results.empty()) {
            throw ConfigError("unknown suite '" + suite +
                              "' (minimizer, spectral, monotonicity, volume, all)");
        }
        bool all_ok = true;
        for (const SuiteResult& r : results) {
            std::cout << (r.ok() ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.checks
                      << " checks, " << r.violations << " violations (" << r.detail
                      << ", " << fmt17(r.seconds) << " s)\n";
            all_ok = all_ok && r.ok();
        }
        return all_ok ? 0 : 1;
    });
}

int cmd_render(const std::string& state_path, const std::string& out_path,
               const std::string& phi_path, const std::string& psi_path) {
    return guarded_execute("render", [&]() {
        const PhaseField state = load_phase_pgm(state_path);
        PgmImage img;
        img.width = state.geom.n;
        img.height = state.geom.n;
        img.pixels.resize(state.values.size());
        for (std::size_t i = 0; i < state.values.size(); ++i) {
            img.pixels[i] = state.values[i] > 0 ? 255 : 0;
        }

        const auto overlay_outline = [&](const std::string& path) {
            if (path.empty()) return;
            GridGeometry mask_geom;
            const std::vector<std::uint8_t> mask = load_mask_pgm(path, mask_geom);
            if (!(mask_geom == state.geom)) {
                throw ConfigError("mask in '" + path + "' does not match the state grid");
            }
            const GridGeometry g = state.geom;
            for (int iy = 0; iy < g.n; ++iy) {
                for (int ix = 0; ix < g.n; ++ix) {
                    const std::size_t i = g.index(ix, iy);
                    if (!mask[i]) continue;
                    const bool boundary = !mask[g.index(g.wrap(ix + 1), iy)] ||
                                          !mask[g.index(g.wrap(ix - 1), iy)] ||
                                          !mask[g.index(ix, g.wrap(iy + 1))] ||
                                          !mask[g.index(ix, g.wrap(iy - 1))];
                    if (boundary) img.pixels[i] = 128;
                }
            }
        };
        overlay_outline(phi_path);
        overlay_outline(psi_path);

        save_pgm(img, out_path);
        std::cout << "render: wrote " << out_path << "\n";
        return 0;
    });
}

} // namespace obmbo::cli
