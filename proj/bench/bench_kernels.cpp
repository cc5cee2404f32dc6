// Timing comparison of the OpenMP kernels against their serial reference
// paths.  Build target `bench_kernels`; not part of the test suite.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "imdiff/fp_solver.hpp"
#include "imdiff/magnetosphere.hpp"
#include "imdiff/sde.hpp"

using namespace imdiff;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn)
{
    const auto t0 = clock_type::now();
    fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms)
{
    std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main()
{
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    {
        const auto chart = make_rigid_body_chart();
        const Grid2D grid(256, 256, 1.0, 1.5);
        const NoiseSpec noise{0.1, 0.1};
        FPSolver solver(chart, grid, noise);
        const auto p0 = density_from_function(grid, [](double, double z) {
            return std::exp(0.5 * z * z);
        });
        const int steps = 300;

        auto a = p0;
        const double serial = time_ms([&] {
            for (int n = 0; n < steps; ++n) solver.step_reference(a, solver.dt_bound());
        });
        auto b = p0;
        const double parallel = time_ms([&] {
            for (int n = 0; n < steps; ++n) solver.step(b, solver.dt_bound());
        });
        report("fp_step 256x256 x300", serial, parallel);
        if (a.values != b.values) std::printf("  MISMATCH between kernel paths!\n");
    }

    {
        const auto chart = make_rigid_body_chart();
        const auto drift = make_effective_drift(chart);
        const NoiseSpec noise{0.1, 0.1};
        const int steps = 200;

        auto a = ensemble_at(200000, 0.1, 0.2, 1.0, 1.5, 7);
        const double serial = time_ms([&] {
            for (int n = 0; n < steps; ++n) em_step_reference(a, drift, noise, 1e-3);
        });
        auto b = ensemble_at(200000, 0.1, 0.2, 1.0, 1.5, 7);
        const double parallel = time_ms([&] {
            for (int n = 0; n < steps; ++n) em_step(b, drift, noise, 1e-3);
        });
        report("em_step 2e5 x200", serial, parallel);
        if (a.chi != b.chi || a.z != b.z) std::printf("  MISMATCH between kernel paths!\n");
    }

    {
        DipoleGeometry geom;
        MagnetoState shape;
        const auto st0 = maxwell_boltzmann_state(geom, shape, 1.0);
        const int steps = 2000;

        auto a = st0;
        const double serial = time_ms([&] {
            for (int n = 0; n < steps; ++n) diffuse_reference(a, magneto_stable_dt(a));
        });
        auto b = st0;
        const double parallel = time_ms([&] {
            for (int n = 0; n < steps; ++n) diffuse(b, magneto_stable_dt(b));
        });
        report("diffuse 128x32x32 x2000", serial, parallel);
        if (a.p != b.p) std::printf("  MISMATCH between kernel paths!\n");
    }

    return 0;
}
