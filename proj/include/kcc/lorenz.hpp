#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "kcc/kcc_core.hpp"
#include "kcc/sode.hpp"

namespace kcc::lorenz {

/// sigma: Prandtl number, rho: normalized Rayleigh number,
/// beta: wave length number.
struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;

    /// sigma == 0 breaks the second-order reduction (1/sigma terms).
    void validate() const;
    /// Non-fatal physical-range remarks (sigma or beta <= 0).
    std::vector<std::string> warnings() const;
    /// Chaos threshold sigma(sigma+beta+3)/(sigma-beta-1); defined only
    /// when sigma > beta + 1.
    std::optional<double> rho_crit() const;
};

struct LorenzState {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// (x1, x2) = (X, Z), (y1, y2) = (Xdot, Zdot).
struct ReducedState {
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
};

/// The four closed-form deviation curvature components at a reduced
/// point; y2 never enters.
struct PComponents {
    double p11 = 0.0, p12 = 0.0, p21 = 0.0, p22 = 0.0;
    Mat as_mat() const { return {{p11, p12}, {p21, p22}}; }
};

enum class EquilibriumKind { S0, SPlus, SMinus };

std::string to_string(EquilibriumKind kind);

struct EquilibriumAnalysis {
    EquilibriumKind kind = EquilibriumKind::S0;
    double x1_star = 0.0, x2_star = 0.0;
    Mat p_matrix;
    SpectralSummary spectrum;
    double theorem_condition1 = 0.0;  // trace of P there
    double theorem_condition2 = 0.0;  // det of P there
    double linear_tau = 0.0, linear_delta = 0.0;  // filled for S0 only
};

/// Right-hand side of the first-order system:
/// (sigma(Y-X), -XZ + rho X - Y, XY - beta Z).
std::array<double, 3> lorenz_vector_field(const LorenzParams& p,
                                          const LorenzState& s);

/// (G1, G2) of the second-order form  x_i'' + 2 G_i = 0.
std::array<double, 2> g_functions(const LorenzParams& p,
                                  const ReducedState& r);

/// Map a first-order state (and its derivative) to the reduced form.
ReducedState reduce(const LorenzParams& p, const LorenzState& s,
                    const std::array<double, 3>& s_dot);

/// Recover the eliminated variable: Y = x1 + y1/sigma.
double recover_y(const LorenzParams& p, const ReducedState& r);

/// The Lorenz system as a generic SODE with analytic derivatives.
SodeSystem make_sode(const LorenzParams& p);

/// Closed-form geometry (used as oracles for the generic engine and as
/// the fast kernel for trajectory post-processing).
namespace closed_form {

Mat nonlinear_connection(const LorenzParams& p, const ReducedState& r);
Tensor3 berwald_connection(const LorenzParams& p);
std::array<double, 2> epsilon(const LorenzParams& p, const ReducedState& r);
PComponents p_components(const LorenzParams& p, const ReducedState& r);
double p_trace(const LorenzParams& p, const ReducedState& r);
/// Reported torsion component B^2_{12} = -(1+sigma)/(2 sigma). Note that
/// the expanded delta-derivative torsion assembled by the generic engine
/// vanishes identically for this reduction (G has no y2 dependence and N
/// has no x2 dependence), so this closed form is not reproduced by
/// higher_invariants; it is kept as the reference value.
double b212(const LorenzParams& p);

}  // namespace closed_form

/// [S0] for rho <= 1, [S0, S+, S-] for rho > 1.
std::vector<EquilibriumAnalysis> equilibria(const LorenzParams& p);

/// Printed closed-form P at an equilibrium (S0 diagonal, S± full).
Mat equilibrium_p_closed_form(const LorenzParams& p, EquilibriumKind kind);

/// Closed-form eigenvalues of P at an equilibrium.
std::array<std::complex<double>, 2> equilibrium_lambda_closed_form(
    const LorenzParams& p, EquilibriumKind kind);

struct TheoremResult {
    double condition1 = 0.0;  // stability needs < 0; equals trace P(S±)
    double condition2 = 0.0;  // stability needs > 0; equals det P(S±)
    bool stable = false;
    bool marginal = false;  // some condition exactly on the boundary
};

/// Jacobi-stability conditions for S± (requires rho > 1).
TheoremResult jacobi_theorem(const LorenzParams& p);

struct LinearStability {
    double tau = 0.0;  // trace of the linearized 2x2 block at S0
    double delta = 0.0;  // its determinant, sigma (1 - rho)
    std::complex<double> lambda1, lambda2;
};

LinearStability linear_stability_s0(const LorenzParams& p);

}  // namespace kcc::lorenz
