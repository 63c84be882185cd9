#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kcc/batch.hpp"

using namespace kcc;
using namespace kcc::batch;

TEST_CASE("parallel p_series equals the serial reference bit for bit") {
    LorenzParams p;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    std::vector<ReducedState> pts(10000);
    for (auto& r : pts) r = {u(rng), u(rng), u(rng), u(rng)};

    auto serial = p_series_serial(p, pts);
    auto parallel = p_series_parallel(p, pts);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].p11 == parallel[i].p11);
        CHECK(serial[i].p12 == parallel[i].p12);
        CHECK(serial[i].p21 == parallel[i].p21);
        CHECK(serial[i].p22 == parallel[i].p22);
    }
}

TEST_CASE("parallel sweep equals the serial reference bit for bit") {
    SweepGrid grid;
    grid.sigma = {2.0, 10.0};
    grid.rho = {0.5, 15.0, 28.0};
    grid.beta = {1.0, 8.0 / 3};
    for (bool with_t0 : {false, true}) {
        auto serial = sweep_serial(grid, with_t0);
        auto parallel = sweep_parallel(grid, with_t0);
        REQUIRE(serial.size() == grid.size());
        REQUIRE(parallel.size() == grid.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(serial[i].sigma == parallel[i].sigma);
            CHECK(serial[i].rho == parallel[i].rho);
            CHECK(serial[i].beta == parallel[i].beta);
            const bool cond_match =
                (std::isnan(serial[i].condition1) &&
                 std::isnan(parallel[i].condition1)) ||
                serial[i].condition1 == parallel[i].condition1;
            CHECK(cond_match);
            const bool both_nan = std::isnan(serial[i].t0) &&
                                  std::isnan(parallel[i].t0);
            CHECK((both_nan || serial[i].t0 == parallel[i].t0));
        }
    }
}

TEST_CASE("sweep rows come out in lexicographic grid order") {
    SweepGrid grid;
    grid.sigma = {1.0, 2.0};
    grid.rho = {3.0, 4.0, 5.0};
    grid.beta = {0.5, 1.5};
    auto rows = sweep_parallel(grid);
    REQUIRE(rows.size() == 12);
    std::size_t k = 0;
    for (double s : grid.sigma)
        for (double r : grid.rho)
            for (double b : grid.beta) {
                CHECK(rows[k].sigma == s);
                CHECK(rows[k].rho == r);
                CHECK(rows[k].beta == b);
                ++k;
            }
}

TEST_CASE("sweep content: equilibrium count and Theorem values") {
    SweepGrid grid;
    grid.sigma = {10.0};
    grid.rho = {0.5, 15.0, 20.0, 25.0, 28.0, 33.0};
    grid.beta = {8.0 / 3};
    auto rows = sweep_serial(grid);

    CHECK(rows[0].n_equilibria == 1);
    CHECK(std::isnan(rows[0].condition1));
    CHECK(std::isnan(rows[0].condition2));

    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].n_equilibria == 3);
        CHECK_FALSE(rows[i].spm_jacobi_stable);
        auto thm = lorenz::jacobi_theorem(
            LorenzParams{rows[i].sigma, rows[i].rho, rows[i].beta});
        CHECK(rows[i].condition1 == thm.condition1);
        CHECK(rows[i].condition2 == thm.condition2);
    }

    // rho_crit metadata for sigma=10, beta=8/3
    CHECK(rows[0].rho_crit == doctest::Approx(470.0 / 19).epsilon(1e-12));
}

TEST_CASE("empty grid axis is rejected") {
    SweepGrid grid;
    grid.sigma = {10.0};
    grid.rho = {};
    grid.beta = {1.0};
    CHECK_THROWS_AS(sweep_serial(grid), std::invalid_argument);
    CHECK_THROWS_AS(sweep_parallel(grid), std::invalid_argument);
}
