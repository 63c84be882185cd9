#pragma once

#include <cstddef>
#include <vector>

#include "kcc/dynamics.hpp"
#include "kcc/lorenz.hpp"

namespace kcc::batch {

using lorenz::LorenzParams;
using lorenz::PComponents;
using lorenz::ReducedState;

/// Deviation-curvature components at every point of a batch. The serial
/// version is the reference implementation the parallel one is tested
/// against.
std::vector<PComponents> p_series_serial(const LorenzParams& p,
                                         const std::vector<ReducedState>& pts);
std::vector<PComponents> p_series_parallel(
    const LorenzParams& p, const std::vector<ReducedState>& pts);

/// Cartesian parameter grid; every axis must be nonempty. Rows are
/// emitted in lexicographic (sigma, rho, beta) order.
struct SweepGrid {
    std::vector<double> sigma;
    std::vector<double> rho;
    std::vector<double> beta;

    std::size_t size() const {
        return sigma.size() * rho.size() * beta.size();
    }
};

/// One evaluated grid point. Fields that do not apply (conditions when
/// rho <= 1, rho_crit when sigma <= beta+1, t0 when not requested or
/// not found) are NaN.
struct SweepRow {
    double sigma = 0.0, rho = 0.0, beta = 0.0;
    int n_equilibria = 0;
    double rho_crit = 0.0;
    double s0_lambda1 = 0.0, s0_lambda2 = 0.0;  // P(S0) is diagonal
    bool s0_jacobi_stable = false;
    double condition1 = 0.0, condition2 = 0.0;  // S+/- Theorem values
    bool spm_jacobi_stable = false;
    double t0 = 0.0;
};

/// Evaluate the grid; with_t0 additionally locates the kappa0 root at
/// the S0 anchor per point. Throws std::invalid_argument on an empty
/// axis.
std::vector<SweepRow> sweep_serial(const SweepGrid& grid,
                                   bool with_t0 = false);
std::vector<SweepRow> sweep_parallel(const SweepGrid& grid,
                                     bool with_t0 = false);

/// True when the parallel kernels actually run multi-threaded.
bool openmp_enabled();

}  // namespace kcc::batch
