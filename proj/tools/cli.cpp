#include "cli.hpp"

#include "thermoporo/config.hpp"
#include "thermoporo/error.hpp"
#include "thermoporo/macro_solver.hpp"
#include "thermoporo/medium_io.hpp"
#include "thermoporo/parallel.hpp"
#include "thermoporo/params.hpp"
#include "thermoporo/verify.hpp"
#include "thermoporo/vtk.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace thermoporo::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// Failures that are the caller's fault rather than the computation's.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

/// "geometry = FILE" or "geometry.preset = NAME" with geometry.dim, .n, .fraction, .seed.
UnitCellGeometry geometry_from_config(const KeyValueConfig& cfg, const fs::path& base) {
    if (cfg.has("geometry")) {
        const fs::path path = resolve(base, cfg.get_string("geometry"));
        if (!fs::exists(path)) throw UsageError("geometry file " + path.string() + " does not exist");
        return load_geometry(path);
    }
    if (!cfg.has("geometry.preset")) throw ConfigError(cfg.source() + ": either 'geometry' or 'geometry.preset' is required");
    return make_preset(cfg.get_string("geometry.preset"), cfg.get_int("geometry.dim", 2), cfg.get_int("geometry.n", 16),
                       cfg.get_double("geometry.fraction", 0.5),
                       static_cast<std::uint64_t>(cfg.get_int("geometry.seed", 1)));
}

AssembleOptions assemble_options(const KeyValueConfig& cfg, double tol_override) {
    AssembleOptions opt;
    opt.solver.tol = tol_override > 0.0 ? tol_override : cfg.get_double("tol", opt.solver.tol);
    opt.kernel.steps = cfg.get_int("kernel.steps", opt.kernel.steps);
    opt.kernel.dt = cfg.get_double("kernel.dt", opt.kernel.dt);
    opt.kernel.T = cfg.get_double("kernel.T", opt.kernel.T);
    opt.kernel.saturation_tol = cfg.get_double("kernel.saturation_tol", opt.kernel.saturation_tol);
    return opt;
}

KeyValueConfig load_config(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("config file " + path + " does not exist");
    return KeyValueConfig::load(path);
}

// ---- geom -------------------------------------------------------------------------

struct GeomArgs {
    std::string preset = "laminate";
    int dim = 2;
    int n = 16;
    double fraction = 0.5;
    std::uint64_t seed = 1;
    bool binary = false;
    std::string out;
    std::string path;
};

int cmd_geom_generate(const GeomArgs& a, std::ostream& out) {
    const auto g = make_preset(a.preset, a.dim, a.n, a.fraction, a.seed);
    save_geometry(g, a.out, a.binary);
    out << "geometry = " << a.out << "\n";
    out << "porosity = " << num(porosity(g)) << "\n";
    out << "hash = " << geometry_hash(g) << "\n";
    return exit_ok;
}

int cmd_geom_validate(const GeomArgs& a, std::ostream& out) {
    if (!fs::exists(a.path)) throw UsageError("geometry file " + a.path + " does not exist");
    const auto g = load_geometry(a.path);
    const auto perc = percolating_axes(g, Phase::Fluid);
    std::string axes;
    for (int d = 0; d < g.dim(); ++d) axes += (d ? " " : "") + std::string(perc[static_cast<std::size_t>(d)] ? "1" : "0");
    out << "dim = " << g.dim() << "\n";
    out << "n = " << g.n() << "\n";
    out << "porosity = " << num(porosity(g)) << "\n";
    out << "fluid_connected = " << (connectivity(g, Phase::Fluid) ? "true" : "false") << "\n";
    out << "solid_connected = " << (connectivity(g, Phase::Solid) ? "true" : "false") << "\n";
    out << "fluid_percolates = " << axes << "\n";
    out << "hash = " << geometry_hash(g) << "\n";
    return exit_ok;
}

// ---- upscale ------------------------------------------------------------------------

int cmd_upscale(const std::string& config, const std::string& out_dir, double tol, std::ostream& out) {
    const auto cfg = load_config(config);
    const fs::path base = fs::path(config).parent_path();
    const auto g = geometry_from_config(cfg, base);
    const auto params = read_parameters(cfg);
    const auto opt = assemble_options(cfg, tol);
    cfg.require_all_consumed();

    const auto medium = assemble(g, params, opt);
    ensure_directory(out_dir);
    const fs::path path = fs::path(out_dir) / "medium.txt";
    save_medium(medium, path);
    out << "regime = " << to_string(medium.regime) << "\n";
    out << "porosity = " << num(medium.porosity) << "\n";
    out << "medium = " << path.string() << "\n";
    if (medium.kernel)
        for (const auto& w : medium.kernel->warnings) out << "warning: " << w << "\n";
    return exit_ok;
}

// ---- macro --------------------------------------------------------------------------

std::function<double(double)> boundary_profile(const KeyValueConfig& cfg) {
    const std::string preset = cfg.get_string("boundary.preset", "none");
    const double amplitude = cfg.get_double("boundary.amplitude", 1.0);
    if (preset == "none") return {};
    if (preset == "constant") return [amplitude](double) { return amplitude; };
    if (preset == "ramp") {
        const double ramp = cfg.get_double("boundary.ramp_time", 1.0);
        if (!(ramp > 0.0)) throw ConfigError(cfg.source() + ": boundary.ramp_time must be positive");
        return [amplitude, ramp](double t) { return amplitude * std::min(t / ramp, 1.0); };
    }
    if (preset == "sine") {
        const double period = cfg.get_double("boundary.period", 1.0);
        if (!(period > 0.0)) throw ConfigError(cfg.source() + ": boundary.period must be positive");
        return [amplitude, period](double t) { return amplitude * std::sin(2.0 * std::numbers::pi * t / period); };
    }
    throw ConfigError(cfg.source() + ": unknown boundary.preset '" + preset + "' (none, constant, ramp, sine)");
}

int cmd_macro(const std::string& config, const std::string& out_dir, double tol, std::ostream& out,
              std::ostream& err) {
    const auto cfg = load_config(config);
    const fs::path base = fs::path(config).parent_path();

    MacroProblem prob;
    if (cfg.has("medium")) {
        const fs::path path = resolve(base, cfg.get_string("medium"));
        if (!fs::exists(path)) throw UsageError("medium file " + path.string() + " does not exist");
        prob.medium = load_medium(path);
    } else {
        const auto g = geometry_from_config(cfg, base);
        const auto params = read_parameters(cfg);
        prob.medium = assemble(g, params, assemble_options(cfg, 0.0));
    }
    prob.domain.dim = prob.medium.dim;
    prob.domain.N = cfg.get_int("domain.N", 32);
    prob.dt = cfg.get_double("dt", prob.dt);
    prob.T = cfg.get_double("T", prob.T);
    prob.picard_tol = tol > 0.0 ? tol : cfg.get_double("picard.tol", prob.picard_tol);
    prob.picard_max_iterations = cfg.get_int("picard.max_iterations", prob.picard_max_iterations);
    const std::string rule = cfg.get_string("convolution", "step-response");
    if (rule == "step-response")
        prob.convolution = ConvolutionRule::StepResponse;
    else if (rule == "trapezoid")
        prob.convolution = ConvolutionRule::KernelTrapezoid;
    else
        throw ConfigError(cfg.source() + ": unknown convolution '" + rule + "' (step-response, trapezoid)");

    const auto profile = boundary_profile(cfg);
    const int axis = cfg.get_int("boundary.axis", 0);
    if (axis < 0 || axis >= prob.domain.dim) throw ConfigError(cfg.source() + ": boundary.axis out of range");
    if (profile)
        prob.v0 = [profile, axis](const Point& x, double t) {
            // Side walls parallel to the drive carry no normal flux.
            Point v{0.0, 0.0, 0.0};
            const double xa = x[static_cast<std::size_t>(axis)];
            if (xa < 1e-12 || xa > 1.0 - 1e-12) v[static_cast<std::size_t>(axis)] = profile(t);
            return v;
        };
    const double theta_b = cfg.get_double("boundary.temperature", 0.0);
    if (theta_b != 0.0) prob.theta0 = [theta_b](const Point&, double) { return theta_b; };
    const int every = cfg.get_int("output_every", 1);
    if (every < 1) throw ConfigError(cfg.source() + ": output_every must be >= 1");
    cfg.require_all_consumed();

    ensure_directory(out_dir);
    const fs::path dir(out_dir);
    MacroSolver solver(prob);
    auto write_snapshot = [&](const MacroState& s) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06d.vtk", s.step);
        write_vtk(dir / name, macro_state_data(solver.grid(), s), "thermoporo macro state t=" + num(s.t));
    };

    std::ostringstream csv;
    csv << "step,t,picard_iterations,mass_residual,continuity_residual,energy,pressure_energy,max_p,max_theta,max_v\n";
    MacroState state = solver.initial_state();
    write_snapshot(state);
    const int steps = solver.step_count();
    int snapshots = 1;
    for (int k = 1; k <= steps; ++k) {
        const auto d = solver.step(state);
        csv << d.step << ',' << num(d.t) << ',' << d.picard_iterations << ',' << num(d.mass_residual) << ','
            << num(d.continuity_residual) << ',' << num(d.energy) << ',' << num(d.pressure_energy) << ','
            << num(d.max_p) << ',' << num(d.max_theta) << ',' << num(d.max_v) << '\n';
        if (k % every == 0 || k == steps) {
            write_snapshot(state);
            ++snapshots;
        }
    }
    write_text(dir / "diagnostics.csv", csv.str());
    for (const auto& w : solver.warnings()) err << "warning: " << w << "\n";
    out << "regime = " << to_string(prob.medium.regime) << "\n";
    out << "steps = " << steps << "\n";
    out << "snapshots = " << snapshots << "\n";
    out << "diagnostics = " << (dir / "diagnostics.csv").string() << "\n";
    return exit_ok;
}

// ---- verify / two-scale -----------------------------------------------------------

int cmd_verify(const std::string& suite, const std::string& out_dir, double tol, std::ostream& out) {
    SolverOptions opt;
    if (tol > 0.0) opt.tol = tol;
    const auto rep = run_suite(suite, opt);
    const std::string text = format_suite(rep);
    out << text;
    if (!out_dir.empty()) {
        ensure_directory(out_dir);
        write_text(fs::path(out_dir) / ("verify_" + suite + ".txt"), text);
    }
    return rep.passed() ? exit_ok : exit_failure;
}

int cmd_two_scale(const std::vector<std::string>& presets, const std::vector<double>& eps, const std::string& out_dir,
                  std::ostream& out) {
    std::string text;
    if (presets.empty()) {
        for (const auto& p : two_scale_presets())
            if (p.trigonometric) text += format_two_scale(two_scale_check(p, eps));
    } else {
        for (const auto& name : presets) text += format_two_scale(two_scale_check(two_scale_preset(name), eps));
    }
    out << text;
    if (!out_dir.empty()) {
        ensure_directory(out_dir);
        write_text(fs::path(out_dir) / "two_scale.txt", text);
    }
    return exit_ok;
}

}  // namespace

UnitCellGeometry make_preset(const std::string& preset, int dim, int n, double fraction, std::uint64_t seed) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("geometry: dim must be 2 or 3");
    if (n < 1) throw std::invalid_argument("geometry: n must be positive");
    const bool uses_fraction = preset == "laminate" || preset == "channel" || preset == "cube";
    if (uses_fraction && !(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("geometry: fraction must lie in (0,1)");
    if (preset == "laminate") return make_laminate(dim, n, fraction);
    if (preset == "checkerboard") return make_checkerboard(dim, n);
    if (preset == "channel") return make_channel(dim, n, fraction);
    if (preset == "cube") return make_centered_cube(dim, n, fraction);
    if (preset == "random") return make_random_connected(dim, n, seed);
    throw std::invalid_argument("unknown geometry preset '" + preset + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Periodic homogenization of thermofluid-saturated rigid porous media", "thermoporo"};
    app.require_subcommand(1);
    double tol = 0.0;
    int threads = 0;
    app.add_option("--tol", tol, "Solver tolerance (upscale, verify) or Picard tolerance (macro)")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "Worker threads (default: THERMOPORO_THREADS, else all cores)")
        ->check(CLI::NonNegativeNumber);

    GeomArgs geom;
    auto* geom_cmd = app.add_subcommand("geom", "Generate or validate voxel geometry files");
    geom_cmd->require_subcommand(1);
    auto* gen = geom_cmd->add_subcommand("generate", "Write a preset geometry");
    gen->add_option("--preset", geom.preset, "laminate, checkerboard, channel, cube or random")
        ->check(CLI::IsMember({"laminate", "checkerboard", "channel", "cube", "random"}));
    gen->add_option("--dim", geom.dim, "Dimension")->check(CLI::IsMember({2, 3}));
    gen->add_option("--n", geom.n, "Voxels per axis")->check(CLI::PositiveNumber);
    gen->add_option("--fraction", geom.fraction, "Layer fraction f, channel width w or cube side a");
    gen->add_option("--seed", geom.seed, "Seed for the random preset");
    gen->add_flag("--binary", geom.binary, "Write raw bytes after the header");
    gen->add_option("--out", geom.out, "Output file")->required();
    auto* val = geom_cmd->add_subcommand("validate", "Parse a geometry file and report its properties");
    val->add_option("path", geom.path, "Geometry file")->required();

    std::string config, out_dir;
    auto* up = app.add_subcommand("upscale", "Compute the effective medium of a unit cell");
    up->add_option("--config", config, "Configuration file")->required();
    up->add_option("--out", out_dir, "Output directory")->required();

    auto* mac = app.add_subcommand("macro", "Time-step the homogenized system");
    mac->add_option("--config", config, "Configuration file")->required();
    mac->add_option("--out", out_dir, "Output directory")->required();

    std::string suite;
    auto* ver = app.add_subcommand("verify", "Run a verification suite");
    std::vector<std::string> suites(suite_names().begin(), suite_names().end());
    ver->add_option("suite", suite, "laminate, checkerboard, two-scale, stokes-tiling or all")
        ->required()
        ->check(CLI::IsMember(suites));
    ver->add_option("--out", out_dir, "Directory for the report");

    std::vector<std::string> presets;
    std::vector<double> eps{0.25, 0.125, 0.0625};
    auto* ts = app.add_subcommand("two-scale", "Two-scale pairing table for the shipped presets");
    std::vector<std::string> preset_names;
    for (const auto& p : two_scale_presets()) preset_names.push_back(p.name);
    ts->add_option("--preset", presets, "Preset name (repeatable; default: all trigonometric presets)")
        ->check(CLI::IsMember(preset_names));
    ts->add_option("--eps", eps, "Comma-separated eps list, strictly decreasing")->delimiter(',');
    ts->add_option("--out", out_dir, "Directory for the table");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (threads > 0) set_thread_count(threads);
        if (*geom_cmd) {
            if (*gen) return cmd_geom_generate(geom, out);
            return cmd_geom_validate(geom, out);
        }
        if (*up) return cmd_upscale(config, out_dir, tol, out);
        if (*mac) return cmd_macro(config, out_dir, tol, out, err);
        if (*ver) return cmd_verify(suite, out_dir, tol, out);
        if (*ts) return cmd_two_scale(presets, eps, out_dir, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_usage;
}

}  // namespace thermoporo::cli
