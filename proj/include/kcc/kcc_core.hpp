#pragma once

#include <complex>

#include "kcc/sode.hpp"

namespace kcc {

/// Connection coefficients and the partial derivatives needed to
/// assemble the deviation curvature tensor.
struct ConnectionData {
    Mat n_coeffs;  // N^i_j = dG^i/dy^j
    Tensor3 berwald;  // G^i_{jl} = dN^i_j/dy^l
    Mat dg_dx;  // dG^i/dx^j
    Tensor3 dn_dx;  // dN^i_j/dx^l, indexed [i][j][l]
    Mat dn_dt;  // dN^i_j/dt (zero for time-independent systems)
};

/// The five KCC invariants plus the alternative torsion definition.
struct KccInvariants {
    Vec epsilon;  // first invariant
    Mat p_tensor;  // second invariant (deviation curvature)
    double p_trace = 0.0;
    Tensor3 p3;  // third invariant, [i][j][k], antisymmetric in j,k
    Tensor4 p4;  // fourth invariant, [i][j][k][l]
    Tensor4 douglas;  // fifth invariant, [i][j][k][l]
    Tensor3 torsion_b;  // alternative third invariant B^i_{jk}
    Tensor4 b4;  // alternative fourth invariant, [i][j][k][l] = dB^i_{kl}/dy^j
};

/// Eigen-structure of a 2x2 deviation curvature matrix and the
/// resulting Jacobi classification.
struct SpectralSummary {
    std::complex<double> lambda_plus;
    std::complex<double> lambda_minus;
    double kappa = 0.0;  // half Ricci scalar, (l+ + l-)/2
    std::complex<double> theta;  // anisotropy, (l+ - l-)/2
    double trace_condition = 0.0;  // P^1_1 + P^2_2, stability needs < 0
    double det_condition = 0.0;  // det P, stability needs > 0
    bool jacobi_stable = false;
    bool marginal = false;  // a boundary case (some eigenvalue real part is 0)
};

/// N^i_j = dG^i/dy^j at a jet (analytic path when available).
Mat nonlinear_connection(const SodeSystem& sys, const Jet& jet);

/// G^i_{jl} = dN^i_j/dy^l.
Tensor3 berwald_connection(const SodeSystem& sys, const Jet& jet);

/// First invariant eps^i = 2 G^i - N^i_j y^j; vanishes at equilibria.
Vec first_invariant(const SodeSystem& sys, const Jet& jet);

/// All connection coefficients and derivatives at a jet.
ConnectionData connection_data(const SodeSystem& sys, const Jet& jet);

/// Deviation curvature tensor assembled from ConnectionData:
/// P^i_j = -2 dG^i/dx^j - 2 G^l G^i_{jl} + y^l dN^i_j/dx^l
///         + N^i_l N^l_j + dN^i_j/dt.
Mat deviation_curvature(const SodeSystem& sys, const Jet& jet);
Mat deviation_curvature(const SodeSystem& sys, const Jet& jet,
                        const ConnectionData& conn);

/// Every invariant at once (the higher ones by finite differences).
KccInvariants higher_invariants(const SodeSystem& sys, const Jet& jet);

/// Eigen-decomposition and Routh-Hurwitz classification of a 2x2 P.
SpectralSummary spectral_summary(const Mat& p);

/// Acceleration of the deviation vector:
/// xi_dd^i = -2 N^i_j xi_dot^j - 2 (dG^i/dx^j) xi^j.
Vec deviation_ode_rhs(const SodeSystem& sys, const Jet& jet, const Vec& xi,
                      const Vec& xi_dot);

}  // namespace kcc
