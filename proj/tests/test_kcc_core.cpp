#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kcc/kcc_core.hpp"
#include "kcc/lorenz.hpp"

using namespace kcc;
using lorenz::LorenzParams;

namespace {

SodeSystem lorenz_fd_only(const LorenzParams& p) {
    // Same G as make_sode but with the analytic callbacks stripped, so
    // everything goes through finite differences.
    SodeSystem sys = lorenz::make_sode(p);
    sys.analytic_dg_dy = nullptr;
    sys.analytic_dg_dx = nullptr;
    return sys;
}

Jet random_jet(std::mt19937& rng, double box = 5.0) {
    std::uniform_real_distribution<double> u(-box, box);
    return Jet{{u(rng), u(rng)}, {u(rng), u(rng)}, 0.0};
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("nonlinear connection closed-form values") {
    LorenzParams p;  // sigma=10, rho=28, beta=8/3
    for (auto sys : {lorenz::make_sode(p), lorenz_fd_only(p)}) {
        Jet jet{{1.0, -3.0}, {2.0, 0.5}, 0.0};
        Mat n = nonlinear_connection(sys, jet);
        CHECK(n[0][0] == doctest::Approx(5.5).epsilon(1e-9));
        CHECK(n[0][1] == doctest::Approx(0.0).epsilon(1e-9));
        // N^2_1 = ((1+sigma+beta)/(2 sigma) - 1) x1 - y1/sigma
        CHECK(n[1][0] ==
              doctest::Approx(((1 + 10 + 8.0 / 3) / 20 - 1) * 1.0 - 0.2)
                  .epsilon(1e-9));
        CHECK(n[1][1] == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("y-independent G gives zero connection") {
    SodeSystem sys;
    sys.dimension = 2;
    sys.g_eval = [](const Vec& x, const Vec&, double) {
        return Vec{x[0] * x[0], x[0] * x[1]};
    };
    Jet jet{{1.4, -2.0}, {0.3, 0.7}, 0.0};
    Mat n = nonlinear_connection(sys, jet);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(n[i][j]) < 1e-9);
}

TEST_CASE("Berwald connection: single nonzero component -1/sigma") {
    LorenzParams p;
    std::mt19937 rng(2024);
    SodeSystem analytic = lorenz::make_sode(p);
    SodeSystem fd = lorenz_fd_only(p);
    for (int rep = 0; rep < 100; ++rep) {
        Jet jet = random_jet(rng);
        Tensor3 gan = berwald_connection(analytic, jet);
        Tensor3 gfd = berwald_connection(fd, jet);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) {
                    const double want =
                        (i == 1 && j == 0 && l == 0) ? -0.1 : 0.0;
                    CHECK(std::abs(gan[i][j][l] - want) < 1e-10);
                    CHECK(std::abs(gfd[i][j][l] - want) < 1e-5);
                    // symmetry in the two lower indices
                    CHECK(std::abs(gfd[i][j][l] - gfd[i][l][j]) < 1e-5);
                }
    }
}

TEST_CASE("first invariant closed-form value and equilibrium zero") {
    LorenzParams p;
    SodeSystem sys = lorenz::make_sode(p);
    Jet jet{{1.0, 2.0}, {3.0, 0.0}, 0.0};
    Vec eps = first_invariant(sys, jet);
    // eps^1 = (1+sigma) y1 + 2 sigma x1 x2 + 2 sigma (1-rho) x1
    //         - ((1+sigma)/2) y1 = (11/2) 3 + 10 (1)(2) + 10 (1-28) 1
    CHECK(eps[0] == doctest::Approx(-233.5).epsilon(1e-10));

    for (auto& eq : lorenz::equilibria(p)) {
        Jet ej{{eq.x1_star, eq.x2_star}, {0.0, 0.0}, 0.0};
        Vec e = first_invariant(sys, ej);
        CHECK(std::abs(e[0]) < 1e-12);
        CHECK(std::abs(e[1]) < 1e-12);
    }

    SodeSystem null_sys;
    null_sys.dimension = 2;
    null_sys.g_eval = [](const Vec&, const Vec&, double) {
        return Vec{0.0, 0.0};
    };
    Vec e0 = first_invariant(null_sys, jet);
    CHECK(e0[0] == 0.0);
    CHECK(e0[1] == 0.0);
}

TEST_CASE("deviation curvature at the equilibria") {
    LorenzParams p;
    SodeSystem sys = lorenz::make_sode(p);
    Mat p0 = deviation_curvature(sys, Jet{{0.0, 0.0}, {0.0, 0.0}, 0.0});
    CHECK(p0[0][0] == doctest::Approx(300.25).epsilon(1e-10));
    CHECK(std::abs(p0[0][1]) < 1e-10);
    CHECK(std::abs(p0[1][0]) < 1e-10);
    CHECK(p0[1][1] == doctest::Approx(64.0 / 9).epsilon(1e-10));

    const double q = std::sqrt(72.0);
    Mat pp = deviation_curvature(sys, Jet{{q, 27.0}, {0.0, 0.0}, 0.0});
    CHECK(pp[0][0] == doctest::Approx(30.25).epsilon(1e-9));
    CHECK(pp[0][1] == doctest::Approx(-10.0 * q).epsilon(1e-9));
    CHECK(pp[1][1] == doctest::Approx(64.0 / 9 - 72.0).epsilon(1e-9));
}

TEST_CASE("generic P matches closed forms at random jets") {
    LorenzParams p;
    std::mt19937 rng(7);
    SodeSystem fd = lorenz_fd_only(p);
    for (int rep = 0; rep < 100; ++rep) {
        Jet jet = random_jet(rng);
        lorenz::ReducedState r{jet.x[0], jet.x[1], jet.y[0], jet.y[1]};
        auto want = lorenz::closed_form::p_components(p, r);
        Mat got = deviation_curvature(fd, jet);
        CHECK(rel_err(got[0][0], want.p11) < 1e-6);
        CHECK(rel_err(got[0][1], want.p12) < 1e-6);
        CHECK(rel_err(got[1][0], want.p21) < 1e-6);
        CHECK(rel_err(got[1][1], want.p22) < 1e-6);
    }
}

TEST_CASE("higher invariants and the assembled torsion vanish") {
    LorenzParams p;
    SodeSystem sys = lorenz::make_sode(p);
    std::mt19937 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        Jet jet = random_jet(rng);
        KccInvariants inv = higher_invariants(sys, jet);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    CHECK(std::abs(inv.p3[i][j][k]) < 1e-8);
                    // exact antisymmetry in the lower indices
                    CHECK(inv.p3[i][j][k] == -inv.p3[i][k][j]);
                    CHECK(inv.torsion_b[i][j][k] ==
                          -inv.torsion_b[i][k][j]);
                    // Every term of the expanded B^i_jk carries either a
                    // y2-derivative of G or an x2-derivative of N, and the
                    // Lorenz reduction has neither: the assembled torsion
                    // vanishes identically.
                    CHECK(std::abs(inv.torsion_b[i][j][k]) < 1e-10);
                    for (int l = 0; l < 2; ++l) {
                        CHECK(std::abs(inv.p4[i][j][k][l]) < 1e-8);
                        CHECK(std::abs(inv.douglas[i][j][k][l]) < 1e-8);
                        CHECK(std::abs(inv.b4[i][j][k][l]) < 1e-6);
                    }
                }
    }
}

TEST_CASE("spectral summary identities and classification") {
    Mat id{{1.0, 0.0}, {0.0, 1.0}};
    auto s = spectral_summary(id);
    CHECK(s.lambda_plus.real() == doctest::Approx(1.0));
    CHECK(s.lambda_minus.real() == doctest::Approx(1.0));
    CHECK(s.kappa == doctest::Approx(1.0));
    CHECK(std::abs(s.theta) == doctest::Approx(0.0));
    CHECK_FALSE(s.jacobi_stable);

    LorenzParams p;
    auto s0 = spectral_summary(
        lorenz::equilibrium_p_closed_form(p, lorenz::EquilibriumKind::S0));
    CHECK(s0.lambda_plus.real() == doctest::Approx(300.25).epsilon(1e-12));
    CHECK(s0.lambda_minus.real() ==
          doctest::Approx(64.0 / 9).epsilon(1e-12));
    CHECK_FALSE(s0.jacobi_stable);

    auto sp = spectral_summary(lorenz::equilibrium_p_closed_form(
        p, lorenz::EquilibriumKind::SPlus));
    CHECK(sp.trace_condition == doctest::Approx(-34.639).epsilon(1e-4));
    CHECK(sp.det_condition == doctest::Approx(-7056.889).epsilon(1e-4));
    CHECK(sp.lambda_plus.real() == doctest::Approx(68.45).epsilon(1e-3));
    CHECK_FALSE(sp.jacobi_stable);

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int rep = 0; rep < 200; ++rep) {
        Mat m{{u(rng), u(rng)}, {u(rng), u(rng)}};
        auto sm = spectral_summary(m);
        auto sum = sm.lambda_plus + sm.lambda_minus;
        auto prod = sm.lambda_plus * sm.lambda_minus;
        CHECK(std::abs(sum.real() - sm.trace_condition) <=
              1e-12 * std::max(1.0, std::abs(sm.trace_condition)));
        CHECK(std::abs(sum.imag()) < 1e-12 * 100.0);
        CHECK(std::abs(prod.real() - sm.det_condition) <=
              1e-12 * std::max(1.0, std::abs(sm.det_condition)));
        const bool rh = sm.trace_condition < 0.0 && sm.det_condition > 0.0;
        const bool eig = sm.lambda_plus.real() < 0.0 &&
                         sm.lambda_minus.real() < 0.0;
        CHECK(sm.jacobi_stable == rh);
        CHECK(sm.jacobi_stable == eig);
    }
}

TEST_CASE("deviation ODE right-hand side") {
    LorenzParams p;
    SodeSystem sys = lorenz::make_sode(p);
    Jet s0{{0.0, 0.0}, {0.0, 0.0}, 0.0};
    Vec zero = deviation_ode_rhs(sys, s0, {0.0, 0.0}, {0.0, 0.0});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);

    Vec acc = deviation_ode_rhs(sys, s0, {1.0, 0.0}, {0.0, 0.0});
    CHECK(acc[0] == doctest::Approx(270.0).epsilon(1e-10));
    CHECK(std::abs(acc[1]) < 1e-10);

    // Against the specialized Lorenz deviation equations written out
    // long-hand with independent coefficients.
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const double sg = p.sigma, rho = p.rho, beta = p.beta;
    const double c = (1 + sg + beta) / sg - 2.0;
    for (int rep = 0; rep < 50; ++rep) {
        Jet jet = random_jet(rng);
        Vec xi{u(rng), u(rng)}, xd{u(rng), u(rng)};
        Vec got = deviation_ode_rhs(sys, jet, xi, xd);
        const double x1 = jet.x[0], x2 = jet.x[1], y1 = jet.y[0];
        const double want1 = -(1 + sg) * xd[0] -
                             (sg * x2 + sg * (1 - rho)) * xi[0] -
                             sg * x1 * xi[1];
        const double want2 =
            -(c * x1 - 2 * y1 / sg) * xd[0] -
            (c * y1 + 2 * x1 * x2 + 2 * (1 - rho + beta) * x1) * xi[0] -
            (x1 * x1 - beta * beta) * xi[1];
        CHECK(std::abs(got[0] - want1) < 1e-10);
        CHECK(std::abs(got[1] - want2) < 1e-10);
    }
}

TEST_CASE("analytic callbacks agree with finite differences") {
    LorenzParams p{3.5, 17.0, 1.2};
    SodeSystem sys = lorenz::make_sode(p);
    SodeSystem fd = lorenz_fd_only(p);
    std::mt19937 rng(404);
    for (int rep = 0; rep < 100; ++rep) {
        Jet jet = random_jet(rng);
        Mat na = nonlinear_connection(sys, jet);
        Mat nf = nonlinear_connection(fd, jet);
        ConnectionData ca = connection_data(sys, jet);
        ConnectionData cf = connection_data(fd, jet);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                CHECK(rel_err(nf[i][j], na[i][j]) < 1e-6);
                CHECK(rel_err(cf.dg_dx[i][j], ca.dg_dx[i][j]) < 1e-6);
            }
    }
}

TEST_CASE("non-finite G evaluation raises EvaluationError") {
    SodeSystem sys;
    sys.dimension = 2;
    sys.g_eval = [](const Vec& x, const Vec&, double) {
        return Vec{1.0 / x[0], 0.0};
    };
    Jet bad{{0.0, 0.0}, {0.0, 0.0}, 0.0};
    CHECK_THROWS_AS(nonlinear_connection(sys, bad), EvaluationError);
}
