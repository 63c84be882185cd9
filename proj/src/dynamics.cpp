#include "kcc/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace kcc::dynamics {

namespace {

double signed_curvature(double v1, double v2, double a1, double a2) {
    const double speed2 = v1 * v1 + v2 * v2;
    if (std::sqrt(speed2) < 1e-300) return std::nan("");
    return (v1 * a2 - a1 * v2) / (speed2 * std::sqrt(speed2));
}

double log_ratio_over_t(double value, double reference, double t) {
    if (t <= 0.0) return std::nan("");
    const double ratio = value / reference;
    if (!(ratio > 0.0)) return std::nan("");
    return std::log(ratio) / t;
}

void push_derived(DeviationTrace& tr, double t, double x1, double x2,
                  double v1, double v2, double a1, double a2) {
    tr.times.push_back(t);
    tr.xi1.push_back(x1);
    tr.xi2.push_back(x2);
    tr.xi1_dot.push_back(v1);
    tr.xi2_dot.push_back(v2);
    tr.xi_norm.push_back(std::sqrt(x1 * x1 + x2 * x2));
    tr.delta1.push_back(log_ratio_over_t(x1, tr.xi10, t));
    tr.delta2.push_back(log_ratio_over_t(x2, tr.xi20, t));
    tr.delta.push_back(
        log_ratio_over_t(std::sqrt(x1 * x1 + x2 * x2), tr.xi10, t));
    tr.kappa0.push_back(signed_curvature(v1, v2, a1, a2));
}

}  // namespace

Trajectory integrate_lorenz(const LorenzParams& p, const LorenzState& s0,
                            const IntegratorConfig& cfg) {
    p.validate();
    Trajectory traj;
    OdeRhs rhs = [&p](double, const Vec& u, Vec& du) {
        auto f = lorenz::lorenz_vector_field(p, {u[0], u[1], u[2]});
        du[0] = f[0];
        du[1] = f[1];
        du[2] = f[2];
    };
    SampleSink sink = [&](double t, const Vec& u) {
        LorenzState s{u[0], u[1], u[2]};
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.reduced.push_back(
            lorenz::reduce(p, s, lorenz::lorenz_vector_field(p, s)));
    };
    integrate_ode(rhs, {s0.x, s0.y, s0.z}, cfg, sink);
    return traj;
}

std::vector<PComponents> p_along_trajectory(const LorenzParams& p,
                                            const Trajectory& traj) {
    if (traj.reduced.empty())
        throw std::invalid_argument("empty trajectory");
    std::vector<PComponents> out;
    out.reserve(traj.reduced.size());
    for (const auto& r : traj.reduced)
        out.push_back(lorenz::closed_form::p_components(p, r));
    return out;
}

DeviationTrace integrate_deviation(
    const LorenzParams& p, DeviationAnchor anchor,
    const std::array<double, 2>& xi0, const std::array<double, 2>& xi_dot0,
    const IntegratorConfig& cfg,
    const std::optional<LorenzState>& traj_start) {
    p.validate();
    DeviationTrace tr;
    tr.xi10 = xi_dot0[0];
    tr.xi20 = xi_dot0[1];

    SodeSystem sys = lorenz::make_sode(p);

    if (anchor != DeviationAnchor::AlongTrajectory) {
        ReducedState eq;
        if (anchor == DeviationAnchor::SPlus ||
            anchor == DeviationAnchor::SMinus) {
            if (p.rho <= 1.0)
                throw std::domain_error(
                    "S+/S- deviation anchor requires rho > 1");
            const double q = std::sqrt(p.beta * (p.rho - 1.0));
            eq.x1 = anchor == DeviationAnchor::SPlus ? q : -q;
            eq.x2 = p.rho - 1.0;
        }
        const Vec ex{eq.x1, eq.x2}, ey{0.0, 0.0};
        const Mat nc = sys.analytic_dg_dy(ex, ey, 0.0);
        const Mat dgdx = sys.analytic_dg_dx(ex, ey, 0.0);

        auto accel = [&](const Vec& u, double& a1, double& a2) {
            a1 = -2.0 * (nc[0][0] * u[2] + nc[0][1] * u[3]) -
                 2.0 * (dgdx[0][0] * u[0] + dgdx[0][1] * u[1]);
            a2 = -2.0 * (nc[1][0] * u[2] + nc[1][1] * u[3]) -
                 2.0 * (dgdx[1][0] * u[0] + dgdx[1][1] * u[1]);
        };
        OdeRhs rhs = [&](double, const Vec& u, Vec& du) {
            du[0] = u[2];
            du[1] = u[3];
            accel(u, du[2], du[3]);
        };
        SampleSink sink = [&](double t, const Vec& u) {
            double a1, a2;
            accel(u, a1, a2);
            push_derived(tr, t, u[0], u[1], u[2], u[3], a1, a2);
        };
        integrate_ode(rhs, {xi0[0], xi0[1], xi_dot0[0], xi_dot0[1]}, cfg,
                      sink);
        return tr;
    }

    if (!traj_start)
        throw std::invalid_argument(
            "along-trajectory anchor needs a trajectory start state");
    ReducedState r0 = lorenz::reduce(
        p, *traj_start, lorenz::lorenz_vector_field(p, *traj_start));

    // State: (x1, x2, y1, y2, xi1, xi2, xi1_dot, xi2_dot).
    auto accel = [&](const Vec& u, double& a1, double& a2) {
        const Vec x{u[0], u[1]}, y{u[2], u[3]};
        const Mat nc = sys.analytic_dg_dy(x, y, 0.0);
        const Mat dgdx = sys.analytic_dg_dx(x, y, 0.0);
        a1 = -2.0 * (nc[0][0] * u[6] + nc[0][1] * u[7]) -
             2.0 * (dgdx[0][0] * u[4] + dgdx[0][1] * u[5]);
        a2 = -2.0 * (nc[1][0] * u[6] + nc[1][1] * u[7]) -
             2.0 * (dgdx[1][0] * u[4] + dgdx[1][1] * u[5]);
    };
    OdeRhs rhs = [&](double, const Vec& u, Vec& du) {
        auto g = lorenz::g_functions(p, {u[0], u[1], u[2], u[3]});
        du[0] = u[2];
        du[1] = u[3];
        du[2] = -2.0 * g[0];
        du[3] = -2.0 * g[1];
        du[4] = u[6];
        du[5] = u[7];
        accel(u, du[6], du[7]);
    };
    SampleSink sink = [&](double t, const Vec& u) {
        double a1, a2;
        accel(u, a1, a2);
        push_derived(tr, t, u[4], u[5], u[6], u[7], a1, a2);
    };
    integrate_ode(rhs,
                  {r0.x1, r0.x2, r0.y1, r0.y2, xi0[0], xi0[1], xi_dot0[0],
                   xi_dot0[1]},
                  cfg, sink);
    return tr;
}

DeviationPoint closed_form_deviation_s0(const LorenzParams& p, double xi10,
                                        double xi20, double t) {
    p.validate();
    const double s = p.sigma, rho = p.rho, b = s + 1.0;
    const double a2 = 4.0 * rho * s + (s - 1.0) * (s - 1.0);
    if (a2 < 0.0)
        throw std::domain_error(
            "4 rho sigma + (sigma-1)^2 < 0: S0 solution not real");
    const double a = std::sqrt(a2);
    DeviationPoint d;
    // All derivatives by direct differentiation of the solution, so the
    // deviation ODEs can be verified against these values rather than
    // being satisfied by construction.
    if (a == 0.0) {
        const double e = std::exp(-0.5 * b * t);
        d.xi1 = xi10 * t * e;
        d.xi1_dot = xi10 * (1.0 - 0.5 * b * t) * e;
        d.xi1_ddot = xi10 * (-b + 0.25 * b * b * t) * e;
    } else {
        const double ep = std::exp(0.5 * (a - b) * t);
        const double em = std::exp(-0.5 * (a + b) * t);
        d.xi1 = xi10 * (ep - em) / a;
        d.xi1_dot = xi10 * (0.5 * (a - b) * ep + 0.5 * (a + b) * em) / a;
        d.xi1_ddot = xi10 *
                     (0.25 * (a - b) * (a - b) * ep -
                      0.25 * (a + b) * (a + b) * em) /
                     a;
    }
    if (p.beta == 0.0) {
        d.xi2 = xi20 * t;
        d.xi2_dot = xi20;
        d.xi2_ddot = 0.0;
    } else {
        d.xi2 = xi20 * std::sinh(p.beta * t) / p.beta;
        d.xi2_dot = xi20 * std::cosh(p.beta * t);
        d.xi2_ddot = xi20 * p.beta * std::sinh(p.beta * t);
    }
    return d;
}

Exponents instability_exponents(const DeviationTrace& trace, double xi10) {
    if (trace.times.empty() || trace.times.back() <= 0.0)
        throw std::invalid_argument("trace must extend past t = 0");
    const std::size_t k = trace.times.size() - 1;
    Exponents e;
    e.horizon = trace.times[k];
    e.delta1 = log_ratio_over_t(trace.xi1[k], trace.xi10, e.horizon);
    e.delta2 = log_ratio_over_t(trace.xi2[k], trace.xi20, e.horizon);
    e.delta = log_ratio_over_t(trace.xi_norm[k], xi10, e.horizon);
    return e;
}

double delta_estimate_s0(const LorenzParams& p, double xi10, double xi20,
                         double t) {
    const double s = p.sigma, b = s + 1.0, beta = p.beta;
    const double a2 = 4.0 * p.rho * s + (s - 1.0) * (s - 1.0);
    const double a = std::sqrt(a2);
    const double r = xi20 / xi10;
    // Log-sum-exp of the two growing parts keeps long horizons finite.
    const double l1 = 2.0 * beta * t + std::log(r * r / (4.0 * beta * beta));
    const double l2 = (a - b) * t - std::log(a2);
    const double m = std::max(l1, l2);
    return (m + std::log(std::exp(l1 - m) + std::exp(l2 - m))) / (2.0 * t);
}

double kappa0(const DeviationTrace& trace, std::size_t k) {
    if (k >= trace.kappa0.size())
        throw std::out_of_range("sample index out of range");
    return trace.kappa0[k];
}

double kappa0_closed_form_s0(const LorenzParams& p, double xi10, double xi20,
                             double t) {
    const double s = p.sigma, b = s + 1.0, beta = p.beta;
    const double a = std::sqrt(4.0 * p.rho * s + (s - 1.0) * (s - 1.0));
    const double eap = std::exp(0.5 * a * t), eam = std::exp(-0.5 * a * t);
    const double ebp = std::exp(beta * t), ebm = std::exp(-beta * t);
    const double w = (a - b) * eap + (a + b) * eam;
    const double denom =
        xi10 * xi10 / (4.0 * a * a) * w * w * std::exp(-b * t) +
        xi20 * xi20 / 4.0 * (ebp + ebm) * (ebp + ebm);
    const double bracket =
        (a - b) * (2.0 * beta - a + b) * eap * ebp +
        (a - b) * (b - 2.0 * beta - a) * eap * ebm +
        (a + b) * (2.0 * beta + a + b) * eam * ebp +
        (a + b) * (a + b - 2.0 * beta) * eam * ebm;
    return xi10 * xi20 / (8.0 * a) * std::exp(-0.5 * b * t) * bracket /
           std::pow(denom, 1.5);
}

T0Result find_t0(const LorenzParams& p, double xi10, double xi20,
                 double t_max) {
    p.validate();
    T0Result res;
    res.approximation = 1.099 / (p.rho + 10.02);
    if (xi10 == 0.0 || xi20 == 0.0) return res;

    // Numerator of kappa0 at unit initial velocities; the true numerator
    // is this times xi10 xi20, so only the overall sign is carried.
    const double orientation = (xi10 * xi20 > 0.0) ? 1.0 : -1.0;
    auto numerator = [&](double t) {
        DeviationPoint d = closed_form_deviation_s0(p, 1.0, 1.0, t);
        return orientation *
               (d.xi1_dot * d.xi2_ddot - d.xi1_ddot * d.xi2_dot);
    };

    const int kGrid = 4000;
    double t_prev = t_max / kGrid;
    double f_prev = numerator(t_prev);
    res.sign_at_start = f_prev > 0.0 ? 1 : (f_prev < 0.0 ? -1 : 0);
    double lo = 0.0, hi = 0.0;
    for (int k = 2; k <= kGrid; ++k) {
        const double t = t_max * k / kGrid;
        const double f = numerator(t);
        if (f == 0.0) {
            res.found = true;
            res.t0 = t;
            break;
        }
        if (f_prev * f < 0.0) {
            lo = t_prev;
            hi = t;
            break;
        }
        t_prev = t;
        f_prev = f;
    }
    {
        const double f_end = numerator(t_max);
        res.sign_at_end = f_end > 0.0 ? 1 : (f_end < 0.0 ? -1 : 0);
    }
    if (!res.found && hi == 0.0) return res;  // no sign change seen

    if (!res.found) {
        double f_lo = numerator(lo);
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = numerator(mid);
            if (f_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if (f_lo * f_mid < 0.0) {
                hi = mid;
            } else {
                lo = mid;
                f_lo = f_mid;
            }
        }
        res.found = true;
        res.t0 = 0.5 * (lo + hi);
    }
    DeviationPoint d = closed_form_deviation_s0(p, xi10, xi20, res.t0);
    res.xi1_at_t0 = d.xi1;
    res.xi2_at_t0 = d.xi2;
    return res;
}

}  // namespace kcc::dynamics
