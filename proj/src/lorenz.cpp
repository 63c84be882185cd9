#include "kcc/lorenz.hpp"

#include <cmath>
#include <stdexcept>

namespace kcc::lorenz {

void LorenzParams::validate() const {
    if (sigma == 0.0)
        throw std::invalid_argument(
            "sigma must be nonzero (the second-order reduction divides by "
            "sigma)");
    if (!std::isfinite(sigma) || !std::isfinite(rho) || !std::isfinite(beta))
        throw std::invalid_argument("Lorenz parameters must be finite");
}

std::vector<std::string> LorenzParams::warnings() const {
    std::vector<std::string> w;
    if (sigma < 0.0) w.push_back("sigma < 0 is outside the physical range");
    if (beta <= 0.0) w.push_back("beta <= 0 is outside the physical range");
    return w;
}

std::optional<double> LorenzParams::rho_crit() const {
    if (sigma <= beta + 1.0) return std::nullopt;
    return sigma * (sigma + beta + 3.0) / (sigma - beta - 1.0);
}

std::string to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::S0: return "S0";
        case EquilibriumKind::SPlus: return "S+";
        case EquilibriumKind::SMinus: return "S-";
    }
    return "?";
}

std::array<double, 3> lorenz_vector_field(const LorenzParams& p,
                                          const LorenzState& s) {
    return {p.sigma * (s.y - s.x), -s.x * s.z + p.rho * s.x - s.y,
            s.x * s.y - p.beta * s.z};
}

std::array<double, 2> g_functions(const LorenzParams& p,
                                  const ReducedState& r) {
    p.validate();
    const double s = p.sigma, rho = p.rho, b = p.beta;
    const double g1 = 0.5 * ((1.0 + s) * r.y1 + s * r.x1 * r.x2 +
                             s * (1.0 - rho) * r.x1);
    const double c = (1.0 + s + b) / s - 2.0;
    const double g2 =
        0.5 * (c * r.x1 * r.y1 - r.y1 * r.y1 / s +
               (1.0 - rho + b) * r.x1 * r.x1 + r.x1 * r.x1 * r.x2 -
               b * b * r.x2);
    return {g1, g2};
}

ReducedState reduce(const LorenzParams& p, const LorenzState& s,
                    const std::array<double, 3>& s_dot) {
    (void)p;
    return {s.x, s.z, s_dot[0], s_dot[2]};
}

double recover_y(const LorenzParams& p, const ReducedState& r) {
    p.validate();
    return r.x1 + r.y1 / p.sigma;
}

SodeSystem make_sode(const LorenzParams& p) {
    p.validate();
    SodeSystem sys;
    sys.dimension = 2;
    sys.time_dependent = false;
    sys.g_eval = [p](const Vec& x, const Vec& y, double) -> Vec {
        auto g = g_functions(p, {x[0], x[1], y[0], y[1]});
        return {g[0], g[1]};
    };
    const double s = p.sigma, rho = p.rho, b = p.beta;
    const double c = (1.0 + s + b) / s - 2.0;
    sys.analytic_dg_dy = [s, c](const Vec& x, const Vec& y, double) -> Mat {
        return {{0.5 * (1.0 + s), 0.0}, {0.5 * c * x[0] - y[0] / s, 0.0}};
    };
    sys.analytic_dg_dx = [s, rho, b, c](const Vec& x, const Vec& y,
                                        double) -> Mat {
        return {{0.5 * (s * x[1] + s * (1.0 - rho)), 0.5 * s * x[0]},
                {0.5 * (c * y[0] + 2.0 * (1.0 - rho + b) * x[0] +
                        2.0 * x[0] * x[1]),
                 0.5 * (x[0] * x[0] - b * b)}};
    };
    return sys;
}

namespace closed_form {

Mat nonlinear_connection(const LorenzParams& p, const ReducedState& r) {
    const double s = p.sigma, b = p.beta;
    const double c = (1.0 + s + b) / s - 2.0;
    return {{0.5 * (1.0 + s), 0.0}, {0.5 * c * r.x1 - r.y1 / s, 0.0}};
}

Tensor3 berwald_connection(const LorenzParams& p) {
    Tensor3 g = zeros3(2);
    g[1][0][0] = -1.0 / p.sigma;
    return g;
}

std::array<double, 2> epsilon(const LorenzParams& p, const ReducedState& r) {
    const double s = p.sigma, rho = p.rho, b = p.beta;
    const double e1 = 0.5 * (1.0 + s) * r.y1 + s * r.x1 * r.x2 +
                      s * (1.0 - rho) * r.x1;
    const double e2 = 0.5 * ((1.0 + b) / s - 1.0) * r.x1 * r.y1 +
                      (1.0 - rho + b) * r.x1 * r.x1 +
                      r.x1 * r.x1 * r.x2 - b * b * r.x2;
    return {e1, e2};
}

PComponents p_components(const LorenzParams& p, const ReducedState& r) {
    const double s = p.sigma, rho = p.rho, b = p.beta;
    PComponents pc;
    pc.p11 = -s * r.x2 - s * (1.0 - rho) + 0.25 * (1.0 + s) * (1.0 + s);
    pc.p12 = -s * r.x1;
    pc.p21 = (1.0 - b / (2.0 * s)) * r.y1 +
             ((1.0 - s * s - 7.0 * b * s + b + 4.0 * (rho - 1.0) * s) /
              (4.0 * s)) *
                 r.x1 -
             r.x1 * r.x2;
    pc.p22 = -r.x1 * r.x1 + b * b;
    return pc;
}

double p_trace(const LorenzParams& p, const ReducedState& r) {
    PComponents pc = p_components(p, r);
    return pc.p11 + pc.p22;
}

double b212(const LorenzParams& p) {
    return -(1.0 + p.sigma) / (2.0 * p.sigma);
}

}  // namespace closed_form

Mat equilibrium_p_closed_form(const LorenzParams& p, EquilibriumKind kind) {
    const double s = p.sigma, rho = p.rho, b = p.beta;
    if (kind == EquilibriumKind::S0) {
        const double p11 = -(1.0 - rho) * s + 0.25 * (1.0 + s) * (1.0 + s);
        return {{p11, 0.0}, {0.0, b * b}};
    }
    if (p.rho <= 1.0)
        throw std::domain_error("S+/S- exist only for rho > 1");
    const double rad = b * (rho - 1.0);
    if (rad < 0.0)
        throw std::domain_error("beta (rho - 1) < 0: S+/S- are not real");
    const double q = (kind == EquilibriumKind::SPlus ? 1.0 : -1.0) *
                     std::sqrt(rad);
    const double p11 = 0.25 * (1.0 + s) * (1.0 + s);
    const double p12 = -s * q;
    const double p21 = q * (b * (1.0 - 7.0 * s) + 1.0 - s * s) / (4.0 * s);
    const double p22 = b * b - b * (rho - 1.0);
    return {{p11, p12}, {p21, p22}};
}

std::array<std::complex<double>, 2> equilibrium_lambda_closed_form(
    const LorenzParams& p, EquilibriumKind kind) {
    const double s = p.sigma, rho = p.rho, b = p.beta;
    if (kind == EquilibriumKind::S0) {
        return {std::complex<double>(
                    0.25 * (s * (4.0 * rho + s - 2.0) + 1.0), 0.0),
                std::complex<double>(b * b, 0.0)};
    }
    if (p.rho <= 1.0)
        throw std::domain_error("S+/S- exist only for rho > 1");
    const double m = b * (b - rho + 1.0) - 0.25 * (s + 1.0) * (s + 1.0);
    const double arg =
        m * m + b * (rho - 1.0) * (b * (7.0 * s - 1.0) + s * s - 1.0);
    const std::complex<double> root =
        std::sqrt(std::complex<double>(arg, 0.0));
    const std::complex<double> base(
        b * (b - rho + 1.0) + 0.25 * (s + 1.0) * (s + 1.0), 0.0);
    return {0.5 * (base + root), 0.5 * (base - root)};
}

TheoremResult jacobi_theorem(const LorenzParams& p) {
    if (p.rho <= 1.0)
        throw std::domain_error("jacobi_theorem requires rho > 1");
    const double s = p.sigma, rho = p.rho, b = p.beta;
    TheoremResult t;
    t.condition1 = b * (b - rho + 1.0) + 0.25 * (s + 1.0) * (s + 1.0);
    t.condition2 =
        0.25 * b *
        (b * (-7.0 * rho * s + rho + s * (s + 9.0)) -
         2.0 * s * (rho - 1.0) * (s + 1.0));
    t.stable = t.condition1 < 0.0 && t.condition2 > 0.0;
    t.marginal = !t.stable && (t.condition1 == 0.0 || t.condition2 == 0.0) &&
                 t.condition1 <= 0.0 && t.condition2 >= 0.0;
    return t;
}

LinearStability linear_stability_s0(const LorenzParams& p) {
    LinearStability l;
    l.tau = -p.sigma - 1.0;
    l.delta = p.sigma * (1.0 - p.rho);
    const double disc = l.tau * l.tau - 4.0 * l.delta;
    const std::complex<double> root =
        std::sqrt(std::complex<double>(disc, 0.0));
    l.lambda1 = (std::complex<double>(l.tau, 0.0) + root) / 2.0;
    l.lambda2 = (std::complex<double>(l.tau, 0.0) - root) / 2.0;
    return l;
}

std::vector<EquilibriumAnalysis> equilibria(const LorenzParams& p) {
    p.validate();
    std::vector<EquilibriumAnalysis> out;

    auto fill = [&](EquilibriumKind kind, double x1, double x2) {
        EquilibriumAnalysis e;
        e.kind = kind;
        e.x1_star = x1;
        e.x2_star = x2;
        e.p_matrix = equilibrium_p_closed_form(p, kind);
        e.spectrum = spectral_summary(e.p_matrix);
        if (kind == EquilibriumKind::S0) {
            e.theorem_condition1 = e.spectrum.trace_condition;
            e.theorem_condition2 = e.spectrum.det_condition;
            LinearStability l = linear_stability_s0(p);
            e.linear_tau = l.tau;
            e.linear_delta = l.delta;
        } else {
            TheoremResult t = jacobi_theorem(p);
            e.theorem_condition1 = t.condition1;
            e.theorem_condition2 = t.condition2;
            e.linear_tau = std::nan("");
            e.linear_delta = std::nan("");
        }
        out.push_back(std::move(e));
    };

    fill(EquilibriumKind::S0, 0.0, 0.0);
    if (p.rho > 1.0) {
        if (p.beta * (p.rho - 1.0) < 0.0)
            throw std::domain_error(
                "beta (rho - 1) < 0: S+/S- are not real");
        const double q = std::sqrt(p.beta * (p.rho - 1.0));
        fill(EquilibriumKind::SPlus, q, p.rho - 1.0);
        fill(EquilibriumKind::SMinus, -q, p.rho - 1.0);
    }
    return out;
}

}  // namespace kcc::lorenz
