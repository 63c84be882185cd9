#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kcc/batch.hpp"
#include "kcc/dynamics.hpp"
#include "kcc/integrate.hpp"
#include "kcc/lorenz.hpp"
#include "kcc/report.hpp"

namespace {

using kcc::IntegratorConfig;
using kcc::IntegratorMethod;
using kcc::batch::SweepGrid;
using kcc::dynamics::DeviationAnchor;
using kcc::lorenz::LorenzParams;
using kcc::lorenz::LorenzState;
using kcc::report::CsvTable;

struct Options {
    LorenzParams params;
    double x0 = 1.0, y0 = 5.0, z0 = 10.0;
    std::string anchor = "s0";
    double xi10 = 1e-9, xi20 = 1e-8;
    double t_end = 0.0;        // 0: per-command default
    double step = 0.0;         // > 0 selects fixed RK4
    double tol = 0.0;          // > 0 selects adaptive RK45
    double sample_every = 1e-2;
    bool want_t0 = false;
    std::string grid_sigma, grid_rho, grid_beta;
    std::string format = "csv";
    std::string out_path;
};

/// "A:B:STEP" -> {A, A+STEP, ..., <= B (within a half-step slack)}.
std::vector<double> parse_grid(const std::string& spec) {
    std::stringstream ss(spec);
    std::string part;
    std::vector<double> f;
    while (std::getline(ss, part, ':'))
        f.push_back(kcc::report::parse_double(part));
    if (f.size() == 1) return {f[0]};
    if (f.size() != 3 || !(f[2] > 0.0) || f[1] < f[0])
        throw std::invalid_argument("grid must be A:B:STEP with STEP > 0");
    std::vector<double> values;
    for (int k = 0;; ++k) {
        const double v = f[0] + k * f[2];
        if (v > f[1] + 1e-9 * f[2]) break;
        values.push_back(v);
    }
    return values;
}

IntegratorConfig make_config(const Options& opt, IntegratorMethod fallback,
                             double fallback_step_or_tol,
                             double default_t_end) {
    if (opt.step > 0.0 && opt.tol > 0.0)
        throw std::invalid_argument("--step and --tol are exclusive");
    IntegratorConfig cfg;
    if (opt.step > 0.0) {
        cfg.method = IntegratorMethod::rk4_fixed;
        cfg.step = opt.step;
    } else if (opt.tol > 0.0) {
        cfg.method = IntegratorMethod::rk45_adaptive;
        cfg.abs_tol = cfg.rel_tol = opt.tol;
    } else {
        cfg.method = fallback;
        if (fallback == IntegratorMethod::rk4_fixed)
            cfg.step = fallback_step_or_tol;
        else
            cfg.abs_tol = cfg.rel_tol = fallback_step_or_tol;
    }
    cfg.t_end = opt.t_end > 0.0 ? opt.t_end : default_t_end;
    cfg.sample_every = opt.sample_every;
    cfg.validate();
    return cfg;
}

nlohmann::ordered_json table_json(const CsvTable& table) {
    auto j = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            const std::string& c = row[i];
            if (c == "true" || c == "false") {
                obj[table.header[i]] = (c == "true");
                continue;
            }
            try {
                obj[table.header[i]] = kcc::report::parse_double(c);
            } catch (const std::invalid_argument&) {
                obj[table.header[i]] = c;
            }
        }
        j.push_back(std::move(obj));
    }
    return j;
}

/// Writes to --out (errors with exit code 2 semantics) or stdout.
void emit(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(opt.out_path);
    if (!os)
        throw std::invalid_argument("cannot open output path: " +
                                    opt.out_path);
    os << text;
    if (!os.good())
        throw std::invalid_argument("write failed: " + opt.out_path);
}

std::string render(const Options& opt, const CsvTable& table) {
    if (opt.format == "json") return table_json(table).dump(2) + "\n";
    std::ostringstream os;
    kcc::report::write_csv(os, table);
    return os.str();
}

void warn_params(const LorenzParams& p) {
    for (const auto& w : p.warnings()) std::cerr << "warning: " << w << "\n";
}

int cmd_analyze(const Options& opt) {
    opt.params.validate();
    warn_params(opt.params);
    auto rep = kcc::report::build_report(opt.params);
    if (opt.format == "json")
        emit(opt, kcc::report::report_json(rep).dump(2) + "\n");
    else
        emit(opt, render(opt, kcc::report::report_table(rep)));
    return 0;
}

int cmd_trajectory(const Options& opt) {
    opt.params.validate();
    warn_params(opt.params);
    auto cfg = make_config(opt, IntegratorMethod::rk4_fixed, 1e-3, 10.0);
    auto traj = kcc::dynamics::integrate_lorenz(
        opt.params, {opt.x0, opt.y0, opt.z0}, cfg);
    auto p_series = kcc::dynamics::p_along_trajectory(opt.params, traj);
    emit(opt, render(opt, kcc::report::trajectory_table(traj, p_series)));
    return 0;
}

DeviationAnchor parse_anchor(const std::string& name) {
    if (name == "s0") return DeviationAnchor::S0;
    if (name == "splus") return DeviationAnchor::SPlus;
    if (name == "sminus") return DeviationAnchor::SMinus;
    throw std::invalid_argument("anchor must be s0, splus or sminus");
}

int cmd_deviation(const Options& opt) {
    opt.params.validate();
    warn_params(opt.params);
    auto cfg = make_config(opt, IntegratorMethod::rk45_adaptive, 1e-10, 2.0);
    auto trace = kcc::dynamics::integrate_deviation(
        opt.params, parse_anchor(opt.anchor), {0.0, 0.0},
        {opt.xi10, opt.xi20}, cfg);
    emit(opt, render(opt, kcc::report::deviation_table(trace)));
    if (opt.want_t0) {
        auto t0 = kcc::dynamics::find_t0(opt.params, opt.xi10, opt.xi20);
        std::ostream& os = opt.out_path.empty() ? std::cerr : std::cout;
        using kcc::report::format_double;
        if (t0.found)
            os << "t0 " << format_double(t0.t0) << " approximation "
               << format_double(t0.approximation) << " xi1 "
               << format_double(t0.xi1_at_t0) << " xi2 "
               << format_double(t0.xi2_at_t0) << "\n";
        else
            os << "t0 not-found approximation "
               << format_double(t0.approximation) << " sign-pattern "
               << t0.sign_at_start << " " << t0.sign_at_end << "\n";
    }
    return 0;
}

int cmd_sweep(const Options& opt) {
    if (opt.grid_sigma.empty() && opt.grid_rho.empty() &&
        opt.grid_beta.empty())
        throw std::invalid_argument(
            "sweep needs at least one of --grid-sigma/--grid-rho/--grid-beta");
    SweepGrid grid;
    grid.sigma = opt.grid_sigma.empty() ? std::vector<double>{opt.params.sigma}
                                        : parse_grid(opt.grid_sigma);
    grid.rho = opt.grid_rho.empty() ? std::vector<double>{opt.params.rho}
                                    : parse_grid(opt.grid_rho);
    grid.beta = opt.grid_beta.empty() ? std::vector<double>{opt.params.beta}
                                      : parse_grid(opt.grid_beta);
    auto rows = kcc::batch::sweep_parallel(grid, opt.want_t0);
    emit(opt, render(opt, kcc::report::sweep_table(rows, opt.want_t0)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Jacobi (KCC) stability analysis of the Lorenz system"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags win");
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);

    app.add_option("--sigma", opt.params.sigma, "Prandtl number");
    app.add_option("--rho", opt.params.rho, "normalized Rayleigh number");
    app.add_option("--beta", opt.params.beta, "wave length number");
    app.add_option("--x0", opt.x0, "initial X");
    app.add_option("--y0", opt.y0, "initial Y");
    app.add_option("--z0", opt.z0, "initial Z");
    app.add_option("--anchor", opt.anchor, "deviation anchor")
        ->check(CLI::IsMember({"s0", "splus", "sminus"}));
    app.add_option("--xi10", opt.xi10, "initial xi1 velocity");
    app.add_option("--xi20", opt.xi20, "initial xi2 velocity");
    app.add_option("--t-end", opt.t_end, "integration horizon")
        ->check(CLI::PositiveNumber);
    app.add_option("--step", opt.step, "fixed RK4 step")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol", opt.tol, "adaptive RK45 tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--sample-every", opt.sample_every, "sample cadence")
        ->check(CLI::PositiveNumber);
    app.add_flag("--t0", opt.want_t0, "locate the kappa0 root");
    app.add_option("--grid-sigma", opt.grid_sigma, "sigma grid A:B:STEP");
    app.add_option("--grid-rho", opt.grid_rho, "rho grid A:B:STEP");
    app.add_option("--grid-beta", opt.grid_beta, "beta grid A:B:STEP");
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", opt.out_path, "output path (default stdout)");

    auto* analyze =
        app.add_subcommand("analyze", "equilibrium stability report");
    auto* trajectory =
        app.add_subcommand("trajectory", "integrate and tabulate P(t)");
    auto* deviation =
        app.add_subcommand("deviation", "integrate the deviation equations");
    auto* sweep = app.add_subcommand("sweep", "parameter-grid Theorem scan");
    for (auto* sub : {analyze, trajectory, deviation, sweep})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) return cmd_analyze(opt);
        if (trajectory->parsed()) return cmd_trajectory(opt);
        if (deviation->parsed()) return cmd_deviation(opt);
        return cmd_sweep(opt);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const kcc::EvaluationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const kcc::IntegrationError& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (last good t = " << e.last_good_time << ")\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
