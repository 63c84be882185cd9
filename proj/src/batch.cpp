#include "kcc/batch.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace kcc::batch {

namespace {

SweepRow evaluate_point(double sigma, double rho, double beta, bool with_t0) {
    LorenzParams p{sigma, rho, beta};
    p.validate();
    SweepRow row;
    row.sigma = sigma;
    row.rho = rho;
    row.beta = beta;
    row.rho_crit = p.rho_crit().value_or(std::nan(""));

    auto lam = lorenz::equilibrium_lambda_closed_form(
        p, lorenz::EquilibriumKind::S0);
    row.s0_lambda1 = lam[0].real();
    row.s0_lambda2 = lam[1].real();
    row.s0_jacobi_stable = row.s0_lambda1 < 0.0 && row.s0_lambda2 < 0.0;

    if (rho > 1.0) {
        row.n_equilibria = 3;
        auto thm = lorenz::jacobi_theorem(p);
        row.condition1 = thm.condition1;
        row.condition2 = thm.condition2;
        row.spm_jacobi_stable = thm.stable;
    } else {
        row.n_equilibria = 1;
        row.condition1 = std::nan("");
        row.condition2 = std::nan("");
        row.spm_jacobi_stable = false;
    }

    row.t0 = std::nan("");
    if (with_t0) {
        auto t0 = dynamics::find_t0(p, 1e-9, 1e-8);
        if (t0.found) row.t0 = t0.t0;
    }
    return row;
}

void check_grid(const SweepGrid& grid) {
    if (grid.sigma.empty() || grid.rho.empty() || grid.beta.empty())
        throw std::invalid_argument("sweep grid has an empty axis");
}

}  // namespace

std::vector<PComponents> p_series_serial(const LorenzParams& p,
                                         const std::vector<ReducedState>& pts) {
    std::vector<PComponents> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        out[i] = lorenz::closed_form::p_components(p, pts[i]);
    return out;
}

std::vector<PComponents> p_series_parallel(
    const LorenzParams& p, const std::vector<ReducedState>& pts) {
    std::vector<PComponents> out(pts.size());
    const std::int64_t n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[i] = lorenz::closed_form::p_components(p, pts[i]);
    return out;
}

std::vector<SweepRow> sweep_serial(const SweepGrid& grid, bool with_t0) {
    check_grid(grid);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double s : grid.sigma)
        for (double r : grid.rho)
            for (double b : grid.beta)
                rows.push_back(evaluate_point(s, r, b, with_t0));
    return rows;
}

std::vector<SweepRow> sweep_parallel(const SweepGrid& grid, bool with_t0) {
    check_grid(grid);
    const std::int64_t nr = static_cast<std::int64_t>(grid.rho.size());
    const std::int64_t nb = static_cast<std::int64_t>(grid.beta.size());
    const std::int64_t n = static_cast<std::int64_t>(grid.size());
    std::vector<SweepRow> rows(grid.size());
    // Rows land at their lexicographic index, so output order is
    // deterministic regardless of scheduling.
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
        const std::int64_t is = k / (nr * nb);
        const std::int64_t ir = (k / nb) % nr;
        const std::int64_t ib = k % nb;
        rows[static_cast<std::size_t>(k)] = evaluate_point(
            grid.sigma[is], grid.rho[ir], grid.beta[ib], with_t0);
    }
    return rows;
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

}  // namespace kcc::batch
