#pragma once

#include <functional>
#include <stdexcept>

#include "kcc/sode.hpp"

namespace kcc {

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::rk45_adaptive;
    double step = 1e-3;  // fixed-step size
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double t_end = 10.0;
    double sample_every = 1e-2;

    void validate() const {
        if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
        if (method == IntegratorMethod::rk4_fixed) {
            if (!(step > 0.0))
                throw std::invalid_argument("step must be > 0");
            if (sample_every < step)
                throw std::invalid_argument(
                    "sample_every must be >= step for fixed-step runs");
        } else {
            if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
                throw std::invalid_argument("tolerances must be > 0");
        }
        if (!(sample_every > 0.0))
            throw std::invalid_argument("sample_every must be > 0");
    }
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double last_good_time)
        : std::runtime_error(what), last_good_time(last_good_time) {}
    double last_good_time;
};

using OdeRhs = std::function<void(double t, const Vec& u, Vec& du)>;

/// Sample callback, invoked at t = 0, sample_every, 2 sample_every, ...
/// and at t_end.
using SampleSink = std::function<void(double t, const Vec& u)>;

/// Integrate u' = rhs(t, u) from u0 over [0, cfg.t_end], emitting
/// samples at the configured cadence. Fixed RK4 or adaptive
/// Dormand-Prince 5(4) depending on cfg.method.
void integrate_ode(const OdeRhs& rhs, const Vec& u0,
                   const IntegratorConfig& cfg, const SampleSink& sink);

}  // namespace kcc
