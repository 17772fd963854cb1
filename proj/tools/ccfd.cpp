// Command-line surface: scheme verification, resolution/stability analysis,
// boundary-closure optimization, and the PDE benchmark experiments.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccfd/ccfd.hpp"
#include "ccfd/runtime.hpp"

namespace fs = std::filesystem;
using namespace ccfd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1; // verification / feasibility / solver failure
constexpr int kExitUsage = 2;   // bad arguments or malformed inputs

struct SchemeSource {
    SchemeFile file;
    std::string label;
};

/// Resolves "P1"/"P2"/"P3" to the bundled tables, anything else to a file path.
SchemeSource resolve_scheme(const std::string& source) {
    SchemeSource out;
    if (source == "P1" || source == "P2" || source == "P3") {
        const SchemeId id = source == "P1" ? SchemeId::P1
                            : source == "P2" ? SchemeId::P2
                                             : SchemeId::P3;
        out.file.scheme = bundled_scheme(id);
        out.file.provenance = "table";
        out.label = source;
        return out;
    }
    out.file = load_scheme_file(source);
    out.label = fs::path(source).filename().string();
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw CLI::ValidationError("--n", "expected a comma-separated integer list");
    return out;
}

int cmd_verify(const std::string& source) {
    const SchemeSource src = resolve_scheme(source);
    const SchemeDefinition& s = src.file.scheme;

    const OrderConditionReport order = verify_order_conditions(s);
    const Grid grid = Grid::uniform(100, 1.0);
    const ConservationIdentityReport cons = verify_conservation_identities(assemble_matrices(s, grid));
    const int deg20 = quadrature_precision(s, 20);
    const int deg31 = quadrature_precision(s, 31);

    std::printf("scheme %s (%s, depth %d)\n", to_string(s.id), src.file.provenance.c_str(),
                s.depth());
    std::printf("%-34s %12s\n", "condition", "residual");
    for (const auto& e : order.entries) {
        if (e.node >= 0)
            std::printf("  taylor node %d, order h^%-13d %12.3e\n", e.node, e.condition - 1,
                        std::abs(e.residual));
        else
            std::printf("  interior order relation j=%-7d %12.3e\n", e.condition,
                        std::abs(e.residual));
    }
    std::printf("  %-32s %12.3e\n", "||W'A - W||_inf (N=100)", cons.weight_residual);
    std::printf("  %-32s %12.3e\n", "||W'B - [-1,0..0,1]||_inf", cons.flux_residual);
    std::printf("quadrature algebraic degree: %d (n=20), %d (n=31)\n", deg20, deg31);

    bool ok = order.pass(1e-10) && cons.pass(1e-10) && deg20 >= 3 && deg31 >= 3;
    if (!ok) {
        if (!order.pass(1e-10))
            std::printf("FAIL: order conditions exceed 1e-10 (max %.3e)\n", order.max_residual);
        if (!cons.pass(1e-10)) std::printf("FAIL: conservation identities exceed 1e-10\n");
        if (deg20 < 3 || deg31 < 3) std::printf("FAIL: quadrature degree below 3\n");
        return kExitNumeric;
    }
    std::printf("OK: all residuals within 1e-10, quadrature degree >= 3\n");
    return kExitOk;
}

int cmd_analyze(const std::string& source, const std::string& n_csv, const std::string& out_dir) {
    const SchemeSource src = resolve_scheme(source);
    const SchemeDefinition& s = src.file.scheme;
    const std::vector<int> ns = parse_int_list(n_csv);
    fs::create_directories(out_dir);

    write_file_atomic(fs::path(out_dir) / "resolution.csv", resolution_csv(s));

    bool stable = true;
    for (int n : ns) {
        const StabilityReport rep = stability_spectrum(s, n);
        std::ostringstream name;
        name << "spectrum_" << n << ".csv";
        write_file_atomic(fs::path(out_dir) / name.str(), spectrum_csv(rep));
        std::printf("spectrum n=%d: max Re(lambda) = %.6e\n", n, rep.max_real_part);
        stable = stable && rep.max_real_part < 0.0;
    }

    const ResolutionReport res = average_resolution(s);
    for (const auto& e : res.per_node) {
        if (e.critical)
            std::printf("node %d (sigma=%.3f): omega_R=%.4f omega_I=%.4f omega=%.4f\n",
                        e.node_index, e.sigma, e.critical->omega_r, e.critical->omega_i,
                        e.critical->omega);
        else
            std::printf("node %d (sigma=%.3f): no threshold crossing\n", e.node_index, e.sigma);
    }
    if (!res.omega_f) {
        std::printf("infeasible resolution: a node never reaches its threshold\n");
        return kExitNumeric;
    }
    std::printf("omega_f = %.6f\n", *res.omega_f);
    if (!stable) {
        std::printf("FAIL: spectrum has nonnegative real parts\n");
        return kExitNumeric;
    }
    return kExitOk;
}

int cmd_optimize(const std::string& scheme_id, std::uint64_t seed, int generations,
                 int population, bool allow_initial, int stability_n, const std::string& out_path) {
    if (scheme_id != "P1" && scheme_id != "P2" && scheme_id != "P3")
        throw CLI::ValidationError("scheme", "optimize expects a bundled id (P1, P2, P3)");
    const SchemeId id = scheme_id == "P1" ? SchemeId::P1
                        : scheme_id == "P2" ? SchemeId::P2
                                            : SchemeId::P3;
    OptimizationProblem problem = OptimizationProblem::standard(id);
    problem.n_for_stability = stability_n;
    DEConfig config;
    config.rng_seed = seed;
    config.max_generations = generations;
    config.population_size = population;

    if (generations == 0 && !allow_initial) {
        std::fprintf(stderr, "zero generations requested without --allow-initial\n");
        return kExitNumeric;
    }

    OptimizeResult result;
    try {
        result = optimize(problem, config, [](int gen, double best, double spread) {
            std::printf("gen %d best %.6f spread %.3e\n", gen, best, spread);
        });
    } catch (const NoFeasiblePoint& e) {
        std::fprintf(stderr, "no feasible point: %s\n", e.what());
        return kExitNumeric;
    }

    SchemeFile file;
    file.scheme = result.scheme;
    file.provenance = "optimized";
    file.meta = {{"seed", seed},
                 {"generations", result.generations},
                 {"population", config.population_size > 0 ? config.population_size
                                                           : 15 * free_param_count(id)},
                 {"objective", result.best_objective},
                 {"stability_intervals", problem.n_for_stability}};
    const std::string path = out_path.empty() ? ("optimized_" + scheme_id + ".json") : out_path;
    save_scheme_file(path, file);
    std::printf("best objective %.6f after %d generations -> %s\n", result.best_objective,
                result.generations, path.c_str());
    return kExitOk;
}

void write_error_csv(const fs::path& path, const std::vector<std::pair<double, double>>& hist) {
    std::ostringstream out;
    out.precision(17);
    out << "t,linf_error\n";
    for (const auto& [t, e] : hist) out << t << ',' << e << '\n';
    write_file_atomic(path, out.str());
}

void write_conservation_csv(const fs::path& path,
                            const std::vector<std::pair<double, double>>& hist) {
    std::ostringstream out;
    out.precision(17);
    out << "t,residual\n";
    for (const auto& [t, r] : hist) out << t << ',' << r << '\n';
    write_file_atomic(path, out.str());
}

void write_order_csv(const fs::path& path, const std::vector<std::pair<double, double>>& runs,
                     const OrderEstimate& est) {
    std::ostringstream out;
    out.precision(17);
    out << "h,error,pairwise_order\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        out << runs[i].first << ',' << runs[i].second << ',';
        if (i == 0)
            out << "nan";
        else
            out << est.pairwise[i - 1];
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

void write_field_csv(const fs::path& path, const std::vector<double>& x,
                     const std::vector<double>& y, const Field2D& f) {
    std::ostringstream out;
    out.precision(17);
    out << "x,y,value\n";
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) out << x[i] << ',' << y[j] << ',' << f.at(i, j) << '\n';
    write_file_atomic(path, out.str());
}

int cmd_solve(const std::string& experiment, const std::string& source, const std::string& n_csv,
              double t_final, double cfl, double dt, double mach, double epsilon,
              const std::string& out_dir, bool full) {
    const SchemeSource src = resolve_scheme(source);
    const SchemeDefinition& s = src.file.scheme;
    const std::vector<int> ns = parse_int_list(n_csv);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    std::vector<std::pair<double, double>> h_err;

    if (experiment == "advect1d") {
        const double horizon = full ? 1000.0 : t_final;
        AdvectionRun last;
        for (int n : ns) {
            AdvectionRun run = advect_1d(s, n, horizon, cfl);
            std::printf("advect1d n=%d: max Linf error %.6e\n", n, run.max_error);
            h_err.emplace_back(run.h, run.max_error);
            last = std::move(run);
        }
        write_error_csv(dir / "errors.csv", last.error_history);
        const ConservationReport cons = conservation_monitor(s, last);
        write_conservation_csv(dir / "conservation.csv", cons.mismatch_history);
        std::printf("conservation: max per-step mismatch %.3e, identity residual %.3e\n",
                    cons.max_mismatch, cons.max_identity_residual);
    } else if (experiment == "advect2d") {
        const double horizon = full ? 1000.0 : t_final;
        Advection2DRun last;
        for (int n : ns) {
            Advection2DRun run = advect_2d_varcoeff(s, n, dt, horizon);
            std::printf("advect2d n=%d: max Linf error %.6e\n", n, run.max_error);
            h_err.emplace_back(run.h, run.max_error);
            last = std::move(run);
        }
        write_error_csv(dir / "errors.csv", last.error_history);
    } else { // euler-vortex
        VortexConfig cfg;
        cfg.epsilon = epsilon;
        cfg.mach = mach;
        cfg.t_over_char = full ? 200.0 : t_final;
        cfg.snapshot_times = {0.0, 0.5 * cfg.t_over_char, cfg.t_over_char};
        VortexRun last;
        for (int n : ns) {
            cfg.nx = cfg.ny = n;
            VortexRun run = euler_vortex_2d(s, cfg);
            std::printf("euler-vortex n=%d: max Linf pressure error %.6e\n", n,
                        run.max_pressure_error);
            h_err.emplace_back(1.5 * cfg.length / (n - 1), run.max_pressure_error);
            last = std::move(run);
        }
        write_error_csv(dir / "errors.csv", last.pressure_error_history);
        write_conservation_csv(dir / "conservation.csv", last.mass_mismatch_history);
        for (const auto& [tstar, field] : last.vorticity_snapshots) {
            std::ostringstream name;
            name.precision(3);
            name << "vorticity_t" << std::fixed << tstar << ".csv";
            write_field_csv(dir / name.str(), last.x, last.y, field);
        }
    }

    if (h_err.size() >= 2) {
        const OrderEstimate est = error_and_order(h_err);
        write_order_csv(dir / "order.csv", h_err, est);
        std::printf("least-squares order: %.3f\n", est.least_squares);
    }
    return kExitOk;
}

int cmd_export(const std::string& source, const std::string& out_path) {
    const SchemeSource src = resolve_scheme(source);
    save_scheme_file(out_path, src.file);
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Globally conservative fourth-order compact finite-difference schemes"};
    app.require_subcommand(1);
    app.fallthrough(); // lets --config appear after the subcommand
    app.set_config("--config", "", "TOML config file; command-line flags take precedence");

    std::string scheme = "P3";
    std::string n_list = "50,100,200";
    std::string out_dir = ".";
    std::string out_path;
    std::string experiment;
    double t_final = 10.0, cfl = 0.5, dt = 0.001, mach = 1.5, epsilon = 0.1;
    std::uint64_t seed = 0;
    int generations = 500, population = 0, stability_n = 100;
    bool allow_initial = false, full = false;

    auto* verify = app.add_subcommand("verify", "Check order, conservation, and quadrature residuals");
    verify->add_option("scheme", scheme, "Bundled id (P1, P2, P3) or scheme file path")->required();

    auto* analyze = app.add_subcommand("analyze", "Resolution curves, omega_f, stability spectra");
    analyze->add_option("scheme", scheme, "Bundled id or scheme file path")->required();
    analyze->add_option("--n", n_list, "Comma-separated stability grid sizes");
    analyze->add_option("--out-dir", out_dir, "Output directory for CSV files");

    auto* optimize_cmd = app.add_subcommand("optimize", "Differential-evolution search for a closure");
    optimize_cmd->add_option("scheme", scheme, "Bundled id (P1, P2, P3)")->required();
    optimize_cmd->add_option("--seed", seed, "RNG seed");
    optimize_cmd->add_option("--generations", generations, "Maximum DE generations");
    optimize_cmd->add_option("--population", population, "Population size (0 = 15 x dimension)");
    optimize_cmd->add_option("--stability-n", stability_n, "Stability grid intervals in the objective");
    optimize_cmd->add_flag("--allow-initial", allow_initial,
                           "With --generations 0, accept the best of the initial population");
    optimize_cmd->add_option("--out", out_path, "Output scheme JSON path");

    auto* solve = app.add_subcommand("solve", "Run a PDE benchmark experiment");
    solve->add_option("experiment", experiment, "advect1d | advect2d | euler-vortex")
        ->required()
        ->check(CLI::IsMember({"advect1d", "advect2d", "euler-vortex"}));
    solve->add_option("scheme", scheme, "Bundled id or scheme file path")->required();
    solve->add_option("--n", n_list, "Comma-separated grid sizes (nodes per axis)")->required();
    solve->add_option("--t-final", t_final,
                      "Horizon: time for advection, t*u_inf/L for euler-vortex");
    solve->add_option("--cfl", cfl, "CFL number (advect1d)")->check(CLI::PositiveNumber);
    solve->add_option("--dt", dt, "Time step (advect2d)")->check(CLI::PositiveNumber);
    solve->add_option("--mach", mach, "Free-stream Mach number (euler-vortex)");
    solve->add_option("--epsilon", epsilon, "Vortex strength (euler-vortex)")
        ->check(CLI::PositiveNumber);
    solve->add_option("--out-dir", out_dir, "Output directory");
    solve->add_flag("--full", full, "Paper horizons: t=1000 (advection), t*=200 (vortex); slow");

    auto* export_cmd = app.add_subcommand("export", "Write a scheme to a JSON file");
    export_cmd->add_option("scheme", scheme, "Bundled id or scheme file path")->required();
    export_cmd->add_option("--out", out_path, "Output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(scheme);
        if (analyze->parsed()) return cmd_analyze(scheme, n_list, out_dir);
        if (optimize_cmd->parsed())
            return cmd_optimize(scheme, seed, generations, population, allow_initial, stability_n,
                                out_path);
        if (solve->parsed())
            return cmd_solve(experiment, scheme, n_list, t_final, cfl, dt, mach, epsilon, out_dir,
                             full);
        if (export_cmd->parsed()) return cmd_export(scheme, out_path);
    } catch (const SchemeFileError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const NonFiniteState& e) {
        std::fprintf(stderr, "solver failed: %s\n", e.what());
        return kExitNumeric;
    } catch (const NegativePressure& e) {
        std::fprintf(stderr, "solver failed: %s\n", e.what());
        return kExitNumeric;
    } catch (const NoCrossing& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kExitNumeric;
    } catch (const DegenerateErrors& e) {
        std::fprintf(stderr, "order extraction failed: %s\n", e.what());
        return kExitNumeric;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
