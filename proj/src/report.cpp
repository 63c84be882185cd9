#include "kcc/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kcc::report {

namespace {

nlohmann::ordered_json complex_json(const std::complex<double>& z) {
    return {{"re", z.real()}, {"im", z.imag()}};
}

std::string bool_cell(bool b) { return b ? "true" : "false"; }

void push_row(CsvTable& t, std::vector<std::string> row) {
    if (row.size() != t.header.size())
        throw std::logic_error("csv row width mismatch");
    t.rows.push_back(std::move(row));
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

StabilityReport build_report(const LorenzParams& p) {
    p.validate();
    StabilityReport rep;
    rep.params = p;
    rep.rho_crit = p.rho_crit();
    rep.equilibria = lorenz::equilibria(p);
    return rep;
}

nlohmann::ordered_json report_json(const StabilityReport& rep) {
    nlohmann::ordered_json j;
    j["params"] = {{"sigma", rep.params.sigma},
                   {"rho", rep.params.rho},
                   {"beta", rep.params.beta}};
    if (rep.rho_crit)
        j["rho_crit"] = *rep.rho_crit;
    else
        j["rho_crit"] = nullptr;
    j["equilibria"] = nlohmann::ordered_json::array();
    for (const auto& eq : rep.equilibria) {
        nlohmann::ordered_json e;
        e["kind"] = lorenz::to_string(eq.kind);
        e["location"] = {eq.x1_star, eq.x2_star};
        e["p_matrix"] = eq.p_matrix;
        e["lambda_plus"] = complex_json(eq.spectrum.lambda_plus);
        e["lambda_minus"] = complex_json(eq.spectrum.lambda_minus);
        e["kappa"] = eq.spectrum.kappa;
        e["theta"] = complex_json(eq.spectrum.theta);
        e["condition1"] = eq.theorem_condition1;
        e["condition2"] = eq.theorem_condition2;
        e["jacobi_stable"] = eq.spectrum.jacobi_stable;
        e["marginal"] = eq.spectrum.marginal;
        if (eq.kind == lorenz::EquilibriumKind::S0) {
            auto lin = lorenz::linear_stability_s0(rep.params);
            e["linear"] = {{"tau", lin.tau},
                           {"delta", lin.delta},
                           {"lambda1", complex_json(lin.lambda1)},
                           {"lambda2", complex_json(lin.lambda2)}};
        }
        j["equilibria"].push_back(std::move(e));
    }
    return j;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size())
                throw std::invalid_argument("ragged csv row");
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw std::invalid_argument("csv has no header");
    return table;
}

CsvTable report_table(const StabilityReport& rep) {
    CsvTable t;
    t.header = {"sigma",        "rho",        "beta",       "rho_crit",
                "equilibrium",  "x1_star",    "x2_star",    "p11",
                "p12",          "p21",        "p22",        "lambda1_re",
                "lambda1_im",   "lambda2_re", "lambda2_im", "kappa",
                "theta_re",     "theta_im",   "condition1", "condition2",
                "jacobi_stable", "linear_tau", "linear_delta"};
    const double rc = rep.rho_crit.value_or(std::nan(""));
    for (const auto& eq : rep.equilibria) {
        const bool s0 = eq.kind == lorenz::EquilibriumKind::S0;
        push_row(t, {format_double(rep.params.sigma),
                     format_double(rep.params.rho),
                     format_double(rep.params.beta),
                     format_double(rc),
                     lorenz::to_string(eq.kind),
                     format_double(eq.x1_star),
                     format_double(eq.x2_star),
                     format_double(eq.p_matrix[0][0]),
                     format_double(eq.p_matrix[0][1]),
                     format_double(eq.p_matrix[1][0]),
                     format_double(eq.p_matrix[1][1]),
                     format_double(eq.spectrum.lambda_plus.real()),
                     format_double(eq.spectrum.lambda_plus.imag()),
                     format_double(eq.spectrum.lambda_minus.real()),
                     format_double(eq.spectrum.lambda_minus.imag()),
                     format_double(eq.spectrum.kappa),
                     format_double(eq.spectrum.theta.real()),
                     format_double(eq.spectrum.theta.imag()),
                     format_double(eq.theorem_condition1),
                     format_double(eq.theorem_condition2),
                     bool_cell(eq.spectrum.jacobi_stable),
                     format_double(s0 ? eq.linear_tau : std::nan("")),
                     format_double(s0 ? eq.linear_delta : std::nan(""))});
    }
    return t;
}

CsvTable trajectory_table(const dynamics::Trajectory& traj,
                          const std::vector<lorenz::PComponents>& p_series) {
    if (traj.times.size() != p_series.size())
        throw std::invalid_argument("trajectory/P series length mismatch");
    CsvTable t;
    t.header = {"t", "X", "Y", "Z", "P11", "P12", "P21", "P22"};
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& s = traj.states[k];
        const auto& pc = p_series[k];
        push_row(t, {format_double(traj.times[k]), format_double(s.x),
                     format_double(s.y), format_double(s.z),
                     format_double(pc.p11), format_double(pc.p12),
                     format_double(pc.p21), format_double(pc.p22)});
    }
    return t;
}

CsvTable deviation_table(const dynamics::DeviationTrace& trace) {
    CsvTable t;
    t.header = {"t",      "xi1",    "xi2",   "xi_norm",
                "delta1", "delta2", "delta", "kappa0"};
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        push_row(t, {format_double(trace.times[k]),
                     format_double(trace.xi1[k]),
                     format_double(trace.xi2[k]),
                     format_double(trace.xi_norm[k]),
                     format_double(trace.delta1[k]),
                     format_double(trace.delta2[k]),
                     format_double(trace.delta[k]),
                     format_double(trace.kappa0[k])});
    return t;
}

CsvTable sweep_table(const std::vector<batch::SweepRow>& rows,
                     bool with_t0) {
    CsvTable t;
    t.header = {"sigma",          "rho",
                "beta",           "n_equilibria",
                "rho_crit",       "s0_lambda1",
                "s0_lambda2",     "s0_jacobi_stable",
                "condition1",     "condition2",
                "spm_jacobi_stable"};
    if (with_t0) t.header.push_back("t0");
    for (const auto& r : rows) {
        std::vector<std::string> cells = {
            format_double(r.sigma),
            format_double(r.rho),
            format_double(r.beta),
            std::to_string(r.n_equilibria),
            format_double(r.rho_crit),
            format_double(r.s0_lambda1),
            format_double(r.s0_lambda2),
            bool_cell(r.s0_jacobi_stable),
            format_double(r.condition1),
            format_double(r.condition2),
            bool_cell(r.spm_jacobi_stable)};
        if (with_t0) cells.push_back(format_double(r.t0));
        push_row(t, std::move(cells));
    }
    return t;
}

}  // namespace kcc::report
