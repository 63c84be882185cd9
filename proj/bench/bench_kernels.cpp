// Compares the serial reference kernels with their OpenMP versions.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "kcc/batch.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f, int reps) {
    f();  // warm-up
    const auto start = Clock::now();
    for (int r = 0; r < reps; ++r) f();
    const std::chrono::duration<double, std::milli> d = Clock::now() - start;
    return d.count() / reps;
}

}  // namespace

int main() {
    using namespace kcc;
    std::printf("openmp: %s\n",
                batch::openmp_enabled() ? "enabled" : "disabled");

    lorenz::LorenzParams p;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-20.0, 20.0);

    std::vector<lorenz::ReducedState> pts(2'000'000);
    for (auto& r : pts) r = {u(rng), u(rng), u(rng), u(rng)};
    volatile double sink = 0.0;
    const double ps = time_ms(
        [&] { sink = batch::p_series_serial(p, pts).back().p22; }, 5);
    const double pp = time_ms(
        [&] { sink = batch::p_series_parallel(p, pts).back().p22; }, 5);
    std::printf("p_series    %8zu pts   serial %9.3f ms   parallel %9.3f ms"
                "   speedup %.2fx\n",
                pts.size(), ps, pp, ps / pp);

    batch::SweepGrid grid;
    for (int i = 0; i < 40; ++i) grid.sigma.push_back(0.5 + 0.5 * i);
    for (int i = 0; i < 50; ++i) grid.rho.push_back(1.5 + 1.0 * i);
    for (int i = 0; i < 10; ++i) grid.beta.push_back(0.5 + 0.5 * i);
    const double ss =
        time_ms([&] { sink = batch::sweep_serial(grid).back().rho; }, 3);
    const double sp =
        time_ms([&] { sink = batch::sweep_parallel(grid).back().rho; }, 3);
    std::printf("sweep       %8zu pts   serial %9.3f ms   parallel %9.3f ms"
                "   speedup %.2fx\n",
                grid.size(), ss, sp, ss / sp);
    (void)sink;
    return 0;
}
