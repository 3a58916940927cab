// qadv: experiment runner for the Hamiltonian-embedded advection emulator.
// Subcommands reproduce the standard experiments (channel flow, lid-driven
// cavity, bound/probability surfaces, noise studies) and write CSV/PGM
// artifacts plus a manifest that reproduces the run.

#include "qadv/experiments.hpp"
#include "qadv/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

using namespace qadv;
using nlohmann::json;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

// ---- parsing helpers -------------------------------------------------------

double parse_theta(const std::string& text, double r_max) {
    if (text == "pi/2") return pi / 2;
    if (text == "pi/4") return pi / 4;
    if (text == "pi/8") return pi / 8;
    if (text == "opt") return optimal_pmin_theta(r_max);
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse theta '" + text +
                                    "' (number, pi/2, pi/4, pi/8 or opt)");
    }
}

StencilFamily parse_family(const std::string& text) {
    if (text == "central") return StencilFamily::Central;
    if (text == "upwind") return StencilFamily::OneSidedUpwind;
    if (text == "downwind") return StencilFamily::OneSidedDownwind;
    throw std::invalid_argument("unknown stencil family '" + text + "'");
}

std::string family_name(StencilFamily f) {
    switch (f) {
        case StencilFamily::Central: return "central";
        case StencilFamily::OneSidedUpwind: return "upwind";
        default: return "downwind";
    }
}

Backend parse_backend(const std::string& text) {
    if (text == "dense") return Backend::DenseSvd;
    if (text == "krylov") return Backend::KrylovLanczos;
    throw std::invalid_argument("unknown backend '" + text + "' (dense or krylov)");
}

StepMode parse_mode(const std::string& text) {
    if (text == "sampled") return StepMode::Sampled;
    if (text == "forced-success") return StepMode::ForcedSuccess;
    throw std::invalid_argument("unknown mode '" + text + "' (sampled or forced-success)");
}

std::vector<long> parse_snapshots(const std::string& text) {
    if (text.empty() || text == "thirds") return {};
    std::vector<long> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        out.push_back(std::stol(text.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// ---- common option plumbing -------------------------------------------------

struct CommonOpts {
    std::string out;
    std::string backend = "krylov";
    std::string mode;
    std::uint64_t seed = 1;
    bool check = false;
    std::string config_file;
};

void add_common(CLI::App* cmd, CommonOpts& o, const std::string& default_out) {
    o.out = default_out;
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "postselection sampling seed");
    cmd->add_option("--backend", o.backend, "evolution backend: dense | krylov");
    cmd->add_option("--mode", o.mode, "step mode: sampled | forced-success");
    cmd->add_flag("--check", o.check, "validate results against the documented thresholds");
    cmd->add_option("--config", o.config_file, "JSON config file (flags override file values)");
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

template <typename T>
void from_config(const json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_manifest(const fs::path& dir, const json& manifest) {
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

void write_series_csv(const std::vector<SeriesPoint>& series, const fs::path& path) {
    std::ofstream out(path);
    out << "step,t,mean_error_pct,max_error_pct\n";
    out.precision(12);
    for (const auto& p : series)
        out << p.step << ',' << p.t << ',' << p.mean_error_pct << ',' << p.max_error_pct << '\n';
}

int exit_check(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "check passed: " << what << "\n";
        return 0;
    }
    std::cerr << "check FAILED: " << what << "\n";
    return 4;
}

// ---- channel ----------------------------------------------------------------

struct ChannelCli {
    CommonOpts common;
    double r_max = 0.1;
    std::string theta = "pi/2";
    long steps = 2000;
    std::string family = "central";
    int order = 2;
    int nx = 64, ny = 64;
    double state_noise = 0.0, matrix_noise = 0.0;
    std::uint64_t noise_seed = 7;
    std::string snapshots = "thirds";
    long series_stride = 100;
    bool dump_operator = false;
};

int run_channel_cmd(const ChannelCli& cli) {
    ChannelConfig cfg;
    cfg.nx = cli.nx;
    cfg.ny = cli.ny;
    cfg.r_max = cli.r_max;
    cfg.theta = parse_theta(cli.theta, cli.r_max);
    cfg.steps = cli.steps;
    cfg.stencil = {parse_family(cli.family), cli.order};
    cfg.backend = parse_backend(cli.common.backend);
    cfg.mode = cli.common.mode.empty() ? StepMode::Sampled : parse_mode(cli.common.mode);
    cfg.seed = cli.common.seed;
    cfg.state_noise = cli.state_noise;
    cfg.matrix_noise = cli.matrix_noise;
    cfg.noise_seed = cli.noise_seed;
    cfg.snapshots = parse_snapshots(cli.snapshots);
    cfg.series_stride = cli.series_stride;

    const fs::path dir(cli.common.out);
    fs::create_directories(dir);

    const ChannelResult res = run_channel(cfg);

    for (const auto& [step_count, field] : res.log.snapshots) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%05ld", step_count);
        save_field_csv(field, dir / (std::string(name) + ".csv"));
        save_field_pgm(field, dir / (std::string(name) + ".pgm"));
        const ScalarField ref =
            channel_analytical(res.grid, res.velocity, step_count * res.dt, res.init_norm);
        Statevector sv;
        sv.amplitudes = field.values.cast<std::complex<double>>();
        const ScalarField errs = error_map(sv, ref);
        std::snprintf(name, sizeof(name), "error_map_%05ld", step_count);
        save_field_csv(errs, dir / (std::string(name) + ".csv"));
        save_field_pgm(errs, dir / (std::string(name) + ".pgm"));
    }
    write_series_csv(res.series, dir / "series.csv");
    save_run_log_csv(res.log, dir / "runlog.csv");
    if (cli.dump_operator) {
        const SparseOperator op =
            assemble_advection(res.grid, res.velocity, cfg.stencil, res.dt);
        save_matrix_market(op, dir / "operator.mtx");
    }

    json summary = {
        {"max_error_pct", res.final_max_error_pct},
        {"mean_error_pct", res.final_mean_error_pct},
        {"n_success", res.log.n_success},
        {"n_fail", res.log.n_fail},
        {"mean_p_success", res.log.mean_p_success()},
        {"success_per_failure",
         res.log.n_fail > 0
             ? json(static_cast<double>(res.log.n_success) / res.log.n_fail)
             : json("inf")},
        {"dt", res.dt},
        {"simulated_time", res.dt * cfg.steps},
    };
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    json manifest = {
        {"tool", "qadv"},
        {"version", qadv::version},
        {"command", "channel"},
        {"grid", {{"nx", cfg.nx}, {"ny", cfg.ny}, {"dx", res.grid.dx}, {"dy", res.grid.dy}}},
        {"stencil", {{"family", family_name(cfg.stencil.family)}, {"order", cfg.stencil.order}}},
        {"r_max", cfg.r_max},
        {"theta", cfg.theta},
        {"steps", cfg.steps},
        {"dt", res.dt},
        {"backend", cli.common.backend},
        {"mode", cfg.mode == StepMode::Sampled ? "sampled" : "forced-success"},
        {"seed", cfg.seed},
        {"noise", {{"state_sigma", cfg.state_noise}, {"matrix_sigma", cfg.matrix_noise},
                   {"seed", cfg.noise_seed}}},
        {"series_stride", cfg.series_stride},
    };
    write_manifest(dir, manifest);

    std::cout << "channel: " << res.log.n_success << " successes, " << res.log.n_fail
              << " failures; max error " << res.final_max_error_pct << "%, mean "
              << res.final_mean_error_pct << "%\n";
    if (cli.common.check)
        return exit_check(res.final_max_error_pct <= 3.0,
                          "max pointwise error <= 3% (got " +
                              std::to_string(res.final_max_error_pct) + "%)");
    return 0;
}

// ---- cavity -----------------------------------------------------------------

struct CavityCli {
    CommonOpts common;
    int n = 64;
    double reynolds = 100.0;
    double tol = 1e-8;
    std::string u_csv, v_csv;
    double r_max = 0.1;
    std::string theta = "pi/2";
    long steps = 2800;
    std::string family = "upwind";
    int order = 2;
    std::string snapshots = "thirds";
    bool dump_operator = false;
};

int run_cavity_cmd(const CavityCli& cli) {
    CavityConfig cfg;
    cfg.n = cli.n;
    cfg.reynolds = cli.reynolds;
    cfg.solver_tol = cli.tol;
    cfg.u_csv = cli.u_csv;
    cfg.v_csv = cli.v_csv;
    cfg.r_max = cli.r_max;
    cfg.theta = parse_theta(cli.theta, cli.r_max);
    cfg.steps = cli.steps;
    cfg.stencil = {parse_family(cli.family), cli.order};
    cfg.backend = parse_backend(cli.common.backend);
    cfg.mode = cli.common.mode.empty() ? StepMode::ForcedSuccess : parse_mode(cli.common.mode);
    cfg.seed = cli.common.seed;
    cfg.snapshots = parse_snapshots(cli.snapshots);

    const fs::path dir(cli.common.out);
    fs::create_directories(dir);

    const CavityResult res = run_cavity(cfg);

    save_field_csv(ScalarField(res.grid, res.velocity.u), dir / "velocity_u.csv");
    save_field_csv(ScalarField(res.grid, res.velocity.v), dir / "velocity_v.csv");
    for (const auto& [step_count, field] : res.log.snapshots) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%05ld", step_count);
        save_field_csv(field, dir / (std::string(name) + ".csv"));
        save_field_pgm(field, dir / (std::string(name) + ".pgm"));
    }
    save_run_log_csv(res.log, dir / "runlog.csv");
    if (cli.dump_operator) {
        const SparseOperator op =
            assemble_advection(res.grid, res.velocity, cfg.stencil, res.dt);
        save_matrix_market(op, dir / "operator.mtx");
    }

    json summary = {
        {"n_success", res.log.n_success},
        {"n_fail", res.log.n_fail},
        {"wall_drift", res.final_wall_drift},
        {"max_norm_deviation", res.max_norm_deviation},
        {"max_divergence", res.max_divergence},
        {"dt", res.dt},
    };
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    json manifest = {
        {"tool", "qadv"},
        {"version", qadv::version},
        {"command", "cavity"},
        {"n", cfg.n},
        {"reynolds", cfg.reynolds},
        {"velocity_source", cfg.u_csv.empty() ? "builtin-solver" : cfg.u_csv},
        {"solver_tol", cfg.solver_tol},
        {"stencil", {{"family", family_name(cfg.stencil.family)}, {"order", cfg.stencil.order}}},
        {"r_max", cfg.r_max},
        {"theta", cfg.theta},
        {"steps", cfg.steps},
        {"backend", cli.common.backend},
        {"mode", cfg.mode == StepMode::Sampled ? "sampled" : "forced-success"},
        {"seed", cfg.seed},
    };
    write_manifest(dir, manifest);

    std::cout << "cavity: " << res.log.n_success << " successes; wall drift "
              << res.final_wall_drift << "; max divergence " << res.max_divergence << "\n";
    if (cli.common.check) {
        const bool ok = res.max_norm_deviation <= 1e-10 &&
                        (cfg.mode != StepMode::ForcedSuccess || res.final_wall_drift <= 1e-6);
        return exit_check(ok, "unit norm within 1e-10 and wall drift within 1e-6");
    }
    return 0;
}

// ---- sweeps ------------------------------------------------------------------

struct SweepCli {
    CommonOpts common;
    double r_lo = 0.01, r_hi = 0.5;
    int r_points = 50;
    double theta_lo = 0.02, theta_hi = pi / 2;
    int theta_points = 50;
};

void add_sweep_options(CLI::App* cmd, SweepCli& s) {
    cmd->add_option("--r-min", s.r_lo, "lower end of the stability-parameter range");
    cmd->add_option("--r-max", s.r_hi, "upper end of the stability-parameter range");
    cmd->add_option("--r-points", s.r_points, "sample count in r");
    cmd->add_option("--theta-min", s.theta_lo, "lower end of the theta range");
    cmd->add_option("--theta-max", s.theta_hi, "upper end of the theta range");
    cmd->add_option("--theta-points", s.theta_points, "sample count in theta");
}

int run_sweep_cmd(const SweepCli& cli, const std::string& kind) {
    const fs::path dir(cli.common.out);
    fs::create_directories(dir);
    const std::vector<double> rs = linspace(cli.r_lo, cli.r_hi, cli.r_points);
    const std::vector<double> thetas = linspace(cli.theta_lo, cli.theta_hi, cli.theta_points);

    std::vector<SweepPoint> points;
    std::string r_name = "r";
    if (kind == "pmin") {
        points = sweep_surface(rs, thetas, [](double r, double t) { return p_min(r, t); });
    } else if (kind == "bounds") {
        points = sweep_surface(rs, thetas,
                               [](double r, double t) { return advection_error_bound(r, t); });
    } else {
        r_name = "r_h";
        points = sweep_surface(rs, thetas,
                               [](double r, double t) { return heat_error_bound(r, t); });
    }
    save_sweep_csv(points, r_name, dir / "sweep.csv");

    json manifest = {
        {"tool", "qadv"},   {"version", qadv::version},
        {"command", kind},  {"r_range", {cli.r_lo, cli.r_hi, cli.r_points}},
        {"theta_range", {cli.theta_lo, cli.theta_hi, cli.theta_points}},
    };
    write_manifest(dir, manifest);
    std::cout << kind << ": wrote " << points.size() << " samples to "
              << (dir / "sweep.csv").string() << "\n";

    if (cli.common.check) {
        if (kind == "pmin") {
            const double v = p_min(0.1, pi / (1.0 + std::sqrt(1.01)));
            return exit_check(std::abs(v - 0.999985) <= 1e-6,
                              "p_min(0.1, theta_opt) = " + std::to_string(v));
        }
        if (kind == "bounds") {
            const double v = advection_error_bound(0.1, pi / 2);
            return exit_check(std::abs(v - 0.0251) <= 1e-3,
                              "bound(0.1, pi/2) = " + std::to_string(v));
        }
        const double v = heat_error_bound(1e-4, pi / 2);
        return exit_check(std::abs(v - 2.0) <= 0.1,
                          "heat bound at r_h=1e-4 = " + std::to_string(v));
    }
    return 0;
}

// ---- noise study --------------------------------------------------------------

struct NoiseCli {
    CommonOpts common;
    double r_max = 0.1;
    long steps = 2000;
    long series_stride = 100;
    std::uint64_t noise_seed = 7;
};

int run_noise_cmd(const NoiseCli& cli) {
    const fs::path dir(cli.common.out);
    fs::create_directories(dir);

    struct Plan { StencilFamily family; int order; const char* tag; };
    const Plan plans[] = {{StencilFamily::Central, 2, "central2"},
                          {StencilFamily::Central, 4, "central4"},
                          {StencilFamily::OneSidedUpwind, 2, "upwind2"}};
    struct NoisePlan { double state, matrix; const char* tag; };
    const NoisePlan noises[] = {{0.0, 0.0, "clean"}, {0.10, 0.0, "state10"},
                                {0.0, 0.01, "matrix1"}};

    json summary = json::object();
    bool slopes_ok = true;
    for (const auto& plan : plans) {
        double clean_slope = 0.0, matrix_slope = 0.0;
        for (const auto& np : noises) {
            ChannelConfig cfg;
            cfg.r_max = cli.r_max;
            cfg.steps = cli.steps;
            cfg.stencil = {plan.family, plan.order};
            cfg.backend = parse_backend(cli.common.backend);
            // noisy embeddings raise the failure odds at theta = pi/2, and a
            // pi/2 failure projects the state onto the noise directions; the
            // study steps deterministically unless sampling is forced
            cfg.mode = cli.common.mode.empty()
                           ? (np.state > 0 || np.matrix > 0 ? StepMode::ForcedSuccess
                                                            : StepMode::Sampled)
                           : parse_mode(cli.common.mode);
            cfg.seed = cli.common.seed;
            cfg.state_noise = np.state;
            cfg.matrix_noise = np.matrix;
            cfg.noise_seed = cli.noise_seed;
            cfg.series_stride = cli.series_stride;
            const ChannelResult res = run_channel(cfg);
            const std::string tag = std::string(plan.tag) + "_" + np.tag;
            write_series_csv(res.series, dir / (tag + ".csv"));

            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (const auto& p : res.series) {
                sx += p.step; sy += p.mean_error_pct;
                sxx += double(p.step) * p.step; sxy += p.step * p.mean_error_pct;
            }
            const double n = static_cast<double>(res.series.size());
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            summary[tag] = {{"final_mean_error_pct", res.final_mean_error_pct},
                            {"final_max_error_pct", res.final_max_error_pct},
                            {"mean_error_slope_per_step", slope}};
            if (np.tag == std::string("clean")) clean_slope = slope;
            if (np.tag == std::string("matrix1")) matrix_slope = slope;
        }
        slopes_ok = slopes_ok && matrix_slope > clean_slope && matrix_slope > 0.0;
    }
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    json manifest = {
        {"tool", "qadv"},    {"version", qadv::version}, {"command", "noise"},
        {"r_max", cli.r_max}, {"steps", cli.steps},       {"seed", cli.common.seed},
        {"noise_seed", cli.noise_seed}, {"backend", cli.common.backend},
        {"cases", {"clean", "state10", "matrix1"}},
        {"stencils", {"central2", "central4", "upwind2"}},
    };
    write_manifest(dir, manifest);
    std::cout << "noise: wrote series for 9 runs to " << dir.string() << "\n";

    if (cli.common.check)
        return exit_check(slopes_ok, "matrix-noise error slope exceeds the noise-free slope");
    return 0;
}

// ---- config-driven dispatch ----------------------------------------------------

int run_config_cmd(const CommonOpts& common) {
    const json cfg = load_config(common.config_file);
    if (!cfg.contains("experiment"))
        throw std::invalid_argument("config must name an 'experiment'");
    const std::string kind = cfg.at("experiment").get<std::string>();

    CommonOpts merged = common;
    from_config(cfg, "out", merged.out);
    if (merged.out.empty()) merged.out = "out/" + kind;
    from_config(cfg, "backend", merged.backend);
    from_config(cfg, "seed", merged.seed);
    from_config(cfg, "mode", merged.mode);
    if (cfg.contains("check")) merged.check = merged.check || cfg.at("check").get<bool>();
    merged.config_file.clear();

    if (kind == "channel") {
        ChannelCli c;
        c.common = merged;
        if (cfg.contains("grid")) {
            from_config(cfg.at("grid"), "nx", c.nx);
            from_config(cfg.at("grid"), "ny", c.ny);
        }
        if (cfg.contains("stencil")) {
            from_config(cfg.at("stencil"), "family", c.family);
            from_config(cfg.at("stencil"), "order", c.order);
        }
        from_config(cfg, "r_max", c.r_max);
        from_config(cfg, "theta", c.theta);
        from_config(cfg, "steps", c.steps);
        from_config(cfg, "series_stride", c.series_stride);
        if (cfg.contains("snapshots") && cfg.at("snapshots").is_array()) {
            c.snapshots.clear();
            for (const auto& s : cfg.at("snapshots"))
                c.snapshots += (c.snapshots.empty() ? "" : ",") + std::to_string(s.get<long>());
        }
        if (cfg.contains("noise")) {
            from_config(cfg.at("noise"), "state_sigma", c.state_noise);
            from_config(cfg.at("noise"), "matrix_sigma", c.matrix_noise);
            from_config(cfg.at("noise"), "seed", c.noise_seed);
        }
        return run_channel_cmd(c);
    }
    if (kind == "cavity") {
        CavityCli c;
        c.common = merged;
        if (cfg.contains("cavity")) {
            const json& cav = cfg.at("cavity");
            from_config(cav, "n", c.n);
            from_config(cav, "re", c.reynolds);
            from_config(cav, "tol", c.tol);
            from_config(cav, "u_csv", c.u_csv);
            from_config(cav, "v_csv", c.v_csv);
        }
        if (cfg.contains("stencil")) {
            from_config(cfg.at("stencil"), "family", c.family);
            from_config(cfg.at("stencil"), "order", c.order);
        }
        from_config(cfg, "r_max", c.r_max);
        from_config(cfg, "theta", c.theta);
        from_config(cfg, "steps", c.steps);
        return run_cavity_cmd(c);
    }
    if (kind == "bounds" || kind == "pmin" || kind == "heat-bounds") {
        SweepCli c;
        c.common = merged;
        if (kind == "pmin") { c.r_lo = 0.0; c.r_hi = 1.0; }
        if (kind == "heat-bounds") { c.r_lo = 0.005; c.r_hi = 0.5; }
        if (cfg.contains("sweep")) {
            const json& sw = cfg.at("sweep");
            from_config(sw, "r_min", c.r_lo);
            from_config(sw, "r_max", c.r_hi);
            from_config(sw, "r_points", c.r_points);
            from_config(sw, "theta_min", c.theta_lo);
            from_config(sw, "theta_max", c.theta_hi);
            from_config(sw, "theta_points", c.theta_points);
        }
        return run_sweep_cmd(c, kind);
    }
    if (kind == "noise") {
        NoiseCli c;
        c.common = merged;
        from_config(cfg, "r_max", c.r_max);
        from_config(cfg, "steps", c.steps);
        from_config(cfg, "series_stride", c.series_stride);
        if (cfg.contains("noise")) from_config(cfg.at("noise"), "seed", c.noise_seed);
        return run_noise_cmd(c);
    }
    throw std::invalid_argument("unknown experiment '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statevector emulator for Hamiltonian-embedded advection time marching"};
    app.require_subcommand(1);

    ChannelCli channel;
    auto* channel_cmd = app.add_subcommand("channel", "Poiseuille channel scalar transport");
    add_common(channel_cmd, channel.common, "out/channel");
    channel_cmd->add_option("--rmax", channel.r_max, "peak CFL number");
    channel_cmd->add_option("--theta", channel.theta,
                            "evolution angle (number, pi/2, pi/4, pi/8, opt)");
    channel_cmd->add_option("--steps", channel.steps, "target successful steps");
    channel_cmd->add_option("--family", channel.family,
                            "stencil family: central | upwind | downwind");
    channel_cmd->add_option("--order", channel.order, "stencil order (2, or 4 for central)");
    channel_cmd->add_option("--nx", channel.nx, "nodes in x");
    channel_cmd->add_option("--ny", channel.ny, "nodes in y");
    channel_cmd->add_option("--state-noise", channel.state_noise, "initial-state noise fraction");
    channel_cmd->add_option("--matrix-noise", channel.matrix_noise, "operator noise fraction");
    channel_cmd->add_option("--noise-seed", channel.noise_seed, "noise stream seed");
    channel_cmd->add_option("--snapshots", channel.snapshots,
                            "success counts, e.g. 0,667,1333,2000");
    channel_cmd->add_option("--series-stride", channel.series_stride, "error series stride");
    channel_cmd->add_flag("--dump-operator", channel.dump_operator, "write operator.mtx");

    CavityCli cavity;
    auto* cavity_cmd = app.add_subcommand("cavity", "lid-driven cavity scalar transport");
    add_common(cavity_cmd, cavity.common, "out/cavity");
    cavity_cmd->add_option("--n", cavity.n, "nodes per side");
    cavity_cmd->add_option("--re", cavity.reynolds, "Reynolds number for the built-in solver");
    cavity_cmd->add_option("--tol", cavity.tol, "steady-state residual tolerance");
    cavity_cmd->add_option("--u-csv", cavity.u_csv, "ingest u component from CSV");
    cavity_cmd->add_option("--v-csv", cavity.v_csv, "ingest v component from CSV");
    cavity_cmd->add_option("--rmax", cavity.r_max, "peak CFL number");
    cavity_cmd->add_option("--theta", cavity.theta, "evolution angle");
    cavity_cmd->add_option("--steps", cavity.steps, "target successful steps");
    cavity_cmd->add_option("--family", cavity.family, "stencil family");
    cavity_cmd->add_option("--order", cavity.order, "stencil order");
    cavity_cmd->add_option("--snapshots", cavity.snapshots, "snapshot schedule");
    cavity_cmd->add_flag("--dump-operator", cavity.dump_operator, "write operator.mtx");

    SweepCli bounds, pmin_sweep, heat;
    auto* bounds_cmd = app.add_subcommand("bounds", "advection error-bound surface");
    add_common(bounds_cmd, bounds.common, "out/bounds");
    add_sweep_options(bounds_cmd, bounds);
    pmin_sweep.r_lo = 0.0;
    pmin_sweep.r_hi = 1.0;
    auto* pmin_cmd = app.add_subcommand("pmin", "worst-case success-probability surface");
    add_common(pmin_cmd, pmin_sweep.common, "out/pmin");
    add_sweep_options(pmin_cmd, pmin_sweep);
    heat.r_lo = 0.005;
    heat.r_hi = 0.5;
    auto* heat_cmd = app.add_subcommand("heat-bounds", "heat-equation error-bound surface");
    add_common(heat_cmd, heat.common, "out/heat-bounds");
    add_sweep_options(heat_cmd, heat);

    NoiseCli noise;
    auto* noise_cmd = app.add_subcommand("noise", "noise and stencil comparison study");
    add_common(noise_cmd, noise.common, "out/noise");
    noise_cmd->add_option("--rmax", noise.r_max, "peak CFL number");
    noise_cmd->add_option("--steps", noise.steps, "target successful steps");
    noise_cmd->add_option("--series-stride", noise.series_stride, "error series stride");
    noise_cmd->add_option("--noise-seed", noise.noise_seed, "noise stream seed");

    CommonOpts run_opts;
    auto* run_cmd = app.add_subcommand("run", "run an experiment described by a JSON config");
    add_common(run_cmd, run_opts, "");
    run_cmd->get_option("--config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (channel_cmd->parsed()) return run_channel_cmd(channel);
        if (cavity_cmd->parsed()) return run_cavity_cmd(cavity);
        if (bounds_cmd->parsed()) return run_sweep_cmd(bounds, "bounds");
        if (pmin_cmd->parsed()) return run_sweep_cmd(pmin_sweep, "pmin");
        if (heat_cmd->parsed()) return run_sweep_cmd(heat, "heat-bounds");
        if (noise_cmd->parsed()) return run_noise_cmd(noise);
        if (run_cmd->parsed()) return run_config_cmd(run_opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
