#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kcc/integrate.hpp"
#include "kcc/lorenz.hpp"

namespace kcc::dynamics {

using lorenz::EquilibriumKind;
using lorenz::LorenzParams;
using lorenz::LorenzState;
using lorenz::PComponents;
using lorenz::ReducedState;

struct Trajectory {
    std::vector<double> times;
    std::vector<LorenzState> states;
    std::vector<ReducedState> reduced;  // parallel to states
};

/// What the deviation equations are anchored to: frozen coefficients at
/// an equilibrium, or time-varying coefficients along a trajectory.
enum class DeviationAnchor { S0, SPlus, SMinus, AlongTrajectory };

struct DeviationTrace {
    double xi10 = 0.0, xi20 = 0.0;  // initial velocities
    std::vector<double> times;
    std::vector<double> xi1, xi2, xi1_dot, xi2_dot;
    std::vector<double> xi_norm;
    // Finite-time instability exponents; NaN where the log argument is
    // not positive (a sign change of the component).
    std::vector<double> delta1, delta2, delta;
    std::vector<double> kappa0;  // from ODE-supplied second derivatives
};

struct Exponents {
    double delta1 = 0.0, delta2 = 0.0, delta = 0.0;
    double horizon = 0.0;  // the T the estimates were taken at
};

/// Closed-form S0 deviation solution with its first two derivatives.
struct DeviationPoint {
    double xi1 = 0.0, xi2 = 0.0;
    double xi1_dot = 0.0, xi2_dot = 0.0;
    double xi1_ddot = 0.0, xi2_ddot = 0.0;
};

Trajectory integrate_lorenz(const LorenzParams& p, const LorenzState& s0,
                            const IntegratorConfig& cfg);

/// Closed-form P components at every trajectory sample.
std::vector<PComponents> p_along_trajectory(const LorenzParams& p,
                                            const Trajectory& traj);

/// Integrate the deviation equations from xi(0) = (xi1_0, xi2_0),
/// xi_dot(0) = (xi10, xi20). For AlongTrajectory the reduced Lorenz
/// system is co-integrated from traj_start.
DeviationTrace integrate_deviation(
    const LorenzParams& p, DeviationAnchor anchor,
    const std::array<double, 2>& xi0, const std::array<double, 2>& xi_dot0,
    const IntegratorConfig& cfg,
    const std::optional<LorenzState>& traj_start = std::nullopt);

/// Closed-form solution near S0 for xi(0) = 0, xi_dot(0) = (xi10, xi20):
/// xi1 = xi10 [e^{(a-b)t/2} - e^{-(a+b)t/2}]/a with
/// a = sqrt(4 rho sigma + (sigma-1)^2), b = sigma+1, and
/// xi2 = xi20 sinh(beta t)/beta (limit forms at a = 0 and beta = 0).
DeviationPoint closed_form_deviation_s0(const LorenzParams& p, double xi10,
                                        double xi20, double t);

/// Finite-time exponents at the final sample of a trace.
Exponents instability_exponents(const DeviationTrace& trace, double xi10);

/// The closed-form finite-time estimate of delta near S0 (the growing
/// parts of the two components, combined).
double delta_estimate_s0(const LorenzParams& p, double xi10, double xi20,
                         double t);

/// Signed curvature of the plane curve (xi1, xi2) at sample k.
/// Returns NaN (singular marker) when the speed is below 1e-300.
double kappa0(const DeviationTrace& trace, std::size_t k);

/// kappa0 evaluated from the closed-form S0 solution.
double kappa0_closed_form_s0(const LorenzParams& p, double xi10, double xi20,
                             double t);

struct T0Result {
    bool found = false;
    double t0 = 0.0;
    double approximation = 0.0;  // 1.099 / (rho + 10.02)
    double xi1_at_t0 = 0.0, xi2_at_t0 = 0.0;  // diagnostics
    int sign_at_start = 0, sign_at_end = 0;  // sampled pattern on failure
};

/// First positive root of the kappa0 numerator on (0, t_max], located
/// by bisection to 1e-10. The numerator sign is scale-free in
/// (xi10, xi20), so the root is found on the unit-scale numerator times
/// sign(xi10 xi20).
T0Result find_t0(const LorenzParams& p, double xi10, double xi20,
                 double t_max = 1.0);

}  // namespace kcc::dynamics
