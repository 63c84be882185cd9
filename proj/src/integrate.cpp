#include "kcc/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace kcc {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                 e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;

void rk4_step(const OdeRhs& rhs, double t, Vec& u, double h, Vec& k1, Vec& k2,
              Vec& k3, Vec& k4, Vec& tmp) {
    const size_t n = u.size();
    rhs(t, u, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    for (size_t i = 0; i < n; ++i)
        u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void run_rk4(const OdeRhs& rhs, Vec u, const IntegratorConfig& cfg,
             const SampleSink& sink) {
    const size_t n = u.size();
    Vec k1(n), k2(n), k3(n), k4(n), tmp(n);
    sink(0.0, u);
    double next_sample = cfg.sample_every;
    long step_index = 0;
    double t = 0.0;
    while (t < cfg.t_end - 1e-14 * cfg.t_end) {
        const double h = std::min(cfg.step, cfg.t_end - t);
        rk4_step(rhs, t, u, h, k1, k2, k3, k4, tmp);
        ++step_index;
        t = (h == cfg.step) ? step_index * cfg.step : cfg.t_end;
        if (t >= next_sample - 1e-12 || t >= cfg.t_end) {
            sink(t, u);
            while (next_sample <= t + 1e-12) next_sample += cfg.sample_every;
        }
    }
}

void run_dopri5(const OdeRhs& rhs, Vec u, const IntegratorConfig& cfg,
                const SampleSink& sink) {
    const size_t n = u.size();
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), u_new(n);
    sink(0.0, u);
    double t = 0.0;
    rhs(t, u, k1);  // FSAL

    // Initial step from the scale of the first derivative.
    double h = 1e-4;
    {
        double un = 0.0, dn = 0.0;
        for (size_t i = 0; i < n; ++i) {
            un = std::max(un, std::abs(u[i]));
            dn = std::max(dn, std::abs(k1[i]));
        }
        if (dn > 0.0) h = std::max(1e-8, 0.01 * std::max(un, 1.0) / dn);
    }

    double next_sample = cfg.sample_every;
    const double h_min = 1e-14 * std::max(1.0, cfg.t_end);
    while (t < cfg.t_end) {
        bool hit_boundary = false;
        double target = std::min(next_sample, cfg.t_end);
        if (t + h >= target) {
            h = target - t;
            hit_boundary = true;
        }
        if (h < h_min)
            throw IntegrationError("adaptive step size underflow", t);

        for (size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * a21 * k1[i];
        rhs(t + c2 * h, tmp, k2);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = u[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, tmp, k3);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = u[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, tmp, k4);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = u[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                 a54 * k4[i]);
        rhs(t + c5 * h, tmp, k5);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = u[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                 a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, tmp, k6);
        for (size_t i = 0; i < n; ++i)
            u_new[i] = u[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                   b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, u_new, k7);

        double err = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                  e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                cfg.abs_tol +
                cfg.rel_tol * std::max(std::abs(u[i]), std::abs(u_new[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0) {
            t = hit_boundary ? target : t + h;
            u.swap(u_new);
            k1.swap(k7);
            if (hit_boundary || t >= next_sample - 1e-12) {
                sink(t, u);
                while (next_sample <= t + 1e-12)
                    next_sample += cfg.sample_every;
            }
            const double fac =
                std::clamp(0.9 * std::pow(err > 0.0 ? err : 1e-10, -0.2),
                           0.2, 10.0);
            h = std::min(h * fac, cfg.sample_every);
        } else {
            const double fac =
                std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            h *= fac;
        }
    }
}

}  // namespace

void integrate_ode(const OdeRhs& rhs, const Vec& u0,
                   const IntegratorConfig& cfg, const SampleSink& sink) {
    cfg.validate();
    if (cfg.method == IntegratorMethod::rk4_fixed)
        run_rk4(rhs, u0, cfg, sink);
    else
        run_dopri5(rhs, u0, cfg, sink);
}

}  // namespace kcc
