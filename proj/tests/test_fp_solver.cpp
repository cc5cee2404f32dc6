#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "imdiff/errors.hpp"
#include "imdiff/fp_solver.hpp"

using namespace imdiff;

namespace {

std::mt19937 gen(424242);

/// Reflected heat kernel on [-L, L] by the method of images:
/// sources at 4Lm + z0 and 4Lm - 2L - z0, m in Z.
double reflected_kernel(double z, double z0, double var, double L)
{
    double s = 0.0;
    for (int m = -8; m <= 8; ++m) {
        const double a = z - (4.0 * L * m + z0);
        const double b = z - (4.0 * L * m - 2.0 * L - z0);
        s += std::exp(-0.5 * a * a / var) + std::exp(-0.5 * b * b / var);
    }
    return s / std::sqrt(2.0 * std::numbers::pi * var);
}

double z_variance(const DensityField2D& p)
{
    const Grid2D& g = p.grid;
    double m1 = 0.0, m2 = 0.0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nchi; ++i) {
            const double w = p.at(i, j) * g.cell_area();
            m1 += w * g.z_center(j);
            m2 += w * g.z_center(j) * g.z_center(j);
        }
    return m2 - m1 * m1;
}

/// L1 error of a pure-z diffusion run against the image-sum kernel.
double diffusion_kernel_error(int nz, double t, double d_z, double L)
{
    const Grid2D grid(8, nz, 1.0, L);
    const auto chart = make_constant_chart(1.0, L);
    const NoiseSpec noise{0.0, d_z};

    // Delta at the center of the cell nearest z = 1.0; the oracle uses the
    // same source location.
    const int j0 = static_cast<int>((1.0 + L) / grid.dz());
    const double z0 = grid.z_center(j0);
    DensityField2D p(grid);
    for (int i = 0; i < grid.nchi; ++i) p.at(i, j0) = 1.0;
    p.normalize();

    FPSolver solver(chart, grid, noise);
    const long steps = static_cast<long>(std::ceil(t / solver.dt_bound()));
    const double dt = t / steps;
    for (long n = 0; n < steps; ++n) solver.step(p, dt);

    double err = 0.0;
    for (int j = 0; j < grid.nz; ++j) {
        const double exact = reflected_kernel(grid.z_center(j), z0, d_z * t, L) / (2.0 * grid.chi_max);
        for (int i = 0; i < grid.nchi; ++i)
            err += std::abs(p.at(i, j) - exact) * grid.cell_area();
    }
    return err;
}

} // namespace

TEST_CASE("face velocities are discretely divergence free with silent walls")
{
    const auto chart = make_rigid_body_chart();
    const Grid2D grid(64, 48, 1.0, 1.5);
    const auto f = face_velocity(chart, grid);
    CHECK(f.max_speed > 0.1);

    double max_div = 0.0;
    for (int j = 0; j < grid.nz; ++j)
        for (int i = 0; i < grid.nchi; ++i) {
            const double div = (f.uchi(i + 1, j) - f.uchi(i, j)) / grid.dchi() +
                               (f.uz(i, j + 1) - f.uz(i, j)) / grid.dz();
            max_div = std::max(max_div, std::abs(div));
        }
    CHECK(max_div <= 1e-11 * f.max_speed / std::min(grid.dchi(), grid.dz()));

    for (int j = 0; j < grid.nz; ++j) {
        CHECK(f.uchi(0, j) == 0.0);
        CHECK(f.uchi(grid.nchi, j) == 0.0);
    }
    for (int i = 0; i < grid.nchi; ++i) {
        CHECK(f.uz(i, 0) == 0.0);
        CHECK(f.uz(i, grid.nz) == 0.0);
    }

    CHECK_THROWS_AS(face_velocity(chart, Grid2D(16, 16, 2.0, 1.5)), ConfigError);
}

TEST_CASE("a uniform density is a fixed point of the step")
{
    const auto chart = make_rigid_body_chart();
    const Grid2D grid(64, 64, 1.0, 1.5);
    const NoiseSpec noise{0.1, 0.1};
    const auto p0 = uniform_density(grid);
    const auto p1 = fp_step(p0, chart, noise, 1e-4);
    double dev = 0.0;
    for (size_t k = 0; k < p1.values.size(); ++k)
        dev = std::max(dev, std::abs(p1.values[k] - p0.values[k]));
    CHECK(dev <= 1e-12 * p0.mean_value());
}

TEST_CASE("each step conserves mass to rounding")
{
    const auto chart = make_rigid_body_chart();
    const Grid2D grid(48, 48, 1.0, 1.5);
    const NoiseSpec noise{0.1, 0.1};
    auto p = density_from_function(grid, [](double chi, double z) {
        return std::exp(0.5 * z * z + 0.3 * std::sin(3.0 * chi));
    });
    FPSolver solver(chart, grid, noise);
    const double m0 = p.mass();
    for (int n = 0; n < 50; ++n) solver.step(p, solver.dt_bound());
    CHECK(std::abs(p.mass() - m0) <= 1e-14);
    CHECK(p.min_value() >= -1e-14);
}

TEST_CASE("the stability bound is checked before stepping")
{
    const auto chart = make_rigid_body_chart();
    const Grid2D grid(32, 32, 1.0, 1.5);
    const NoiseSpec noise{0.1, 0.1};
    const auto p0 = uniform_density(grid);
    FPSolver solver(chart, grid, noise);
    CHECK_THROWS_AS(fp_step(p0, chart, noise, 10.0 * solver.dt_bound()), ConfigError);
    CHECK_THROWS_AS(fp_step(p0, chart, noise, -1.0), ConfigError);
    CHECK_THROWS_AS((FPSolver{chart, grid, NoiseSpec{-0.1, 0.1}}), ConfigError);
}

TEST_CASE("diffusion grows the z variance at rate D_z")
{
    // H constant, delta-like start: Var(t) - Var(0) = D_z t on a wide domain.
    const double d_z = 0.2, t = 1.0;
    const Grid2D grid(256, 256, 1.0, 2.5);
    const auto chart = make_constant_chart(1.0, 2.5);
    const NoiseSpec noise{0.0, d_z};

    DensityField2D p(grid);
    const int j0 = grid.nz / 2;
    for (int i = 0; i < grid.nchi; ++i) p.at(i, j0) = 1.0;
    p.normalize();
    const double var0 = z_variance(p);

    FPSolver solver(chart, grid, noise);
    const long steps = static_cast<long>(std::ceil(t / solver.dt_bound()));
    const double dt = t / steps;
    for (long n = 0; n < steps; ++n) solver.step(p, dt);

    CHECK(z_variance(p) - var0 == doctest::Approx(d_z * t).epsilon(0.02));
}

TEST_CASE("pure diffusion converges to the reflected kernel at second order")
{
    const double t = 0.5, d_z = 0.2, L = 1.5;
    const double e64 = diffusion_kernel_error(64, t, d_z, L);
    const double e128 = diffusion_kernel_error(128, t, d_z, L);
    const double e256 = diffusion_kernel_error(256, t, d_z, L);
    CHECK(e256 < 0.01);
    CHECK(e64 / e128 >= 1.8);
    CHECK(e128 / e256 >= 1.8);
}

TEST_CASE("the step agrees with the divergence of Z P")
{
    // One step from a smooth state: the residual (P' - P)/dt + div(Z P)
    // built from the effective drift shrinks at second order in h.  The
    // check stays inside the smooth core of the drift: across the
    // streamfunction clip the velocity has a slope break, so the pointwise
    // comparison of two discretizations is only first order there.
    const auto residual_norm = [](int n) {
        const auto chart = make_rigid_body_chart();
        const Grid2D grid(n, n, 1.0, 1.5);
        const NoiseSpec noise{0.1, 0.1};
        const double cap = advective_cap(chart);
        const auto p = density_from_function(grid, [](double chi, double z) {
            return std::exp(0.3 * chi + 0.4 * z);
        });
        FPSolver solver(chart, grid, noise);
        const double dt = 1e-6;
        DensityField2D p1 = p;
        solver.step(p1, dt);

        const EffectiveDrift drift = make_effective_drift(chart);
        const auto zfield = fp_velocity(p, DriftField(drift), noise);

        std::vector<double> fx(p.values.size()), fy(p.values.size());
        for (size_t k = 0; k < p.values.size(); ++k) {
            fx[k] = zfield.z_chi[k] * p.values[k];
            fy[k] = zfield.z_z[k] * p.values[k];
        }
        double worst = 0.0;
        for (int j = 2; j < grid.nz - 2; ++j)
            for (int i = 2; i < grid.nchi - 2; ++i) {
                bool core = true;
                for (int dj = -2; dj <= 2 && core; ++dj)
                    for (int di = -2; di <= 2 && core; ++di)
                        if (chart.h(grid.chi_center(i + di), grid.z_center(j + dj)) <= cap + 0.05)
                            core = false;
                if (!core) continue;
                const double div =
                    (fx[grid.index(i + 1, j)] - fx[grid.index(i - 1, j)]) / (2.0 * grid.dchi()) +
                    (fy[grid.index(i, j + 1)] - fy[grid.index(i, j - 1)]) / (2.0 * grid.dz());
                const double ddt = (p1.at(i, j) - p.at(i, j)) / dt;
                worst = std::max(worst, std::abs(ddt + div));
            }
        return worst;
    };
    const double r64 = residual_norm(64);
    const double r128 = residual_norm(128);
    CHECK(r128 <= 0.4 * r64);
}

TEST_CASE("fp_solve flattens a pure-diffusion state monotonically")
{
    const Grid2D grid(32, 32, 1.0, 1.0);
    const auto chart = make_constant_chart(1.0, 1.0);
    const NoiseSpec noise{0.3, 0.3};
    const auto p0 = density_from_function(grid, [](double chi, double z) {
        return std::exp(0.8 * chi + 0.5 * z);
    });
    SolverConfig cfg;
    cfg.t_end = 15.0; // several e-foldings of the slowest Neumann mode
    const auto result = fp_solve(p0, chart, noise, cfg);

    const double pbar = 1.0 / grid.area();
    double prev = HUGE_VAL;
    for (const auto& snap : result.snapshots) {
        double dev = 0.0;
        for (double v : snap.p.values) dev = std::max(dev, std::abs(v - pbar) / pbar);
        CHECK(dev <= prev * (1.0 + 1e-9) + 1e-12);
        prev = dev;
    }
    CHECK(prev < 0.01);
    for (const auto& row : result.trace.rows) {
        CHECK(row.mass == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(row.entropy_flow == 0.0);
    }
    CHECK(result.trace.rows.front().t == 0.0);
    CHECK(result.trace.rows.back().t == doctest::Approx(15.0));
}

TEST_CASE("parallel and reference steps are bitwise identical")
{
    const auto chart = make_rigid_body_chart();
    const Grid2D grid(64, 64, 1.0, 1.5);
    const NoiseSpec noise{0.1, 0.1};
    std::uniform_real_distribution<double> u(0.1, 1.0);
    DensityField2D a(grid);
    for (double& v : a.values) v = u(gen);
    a.normalize();
    DensityField2D b = a;

    FPSolver solver(chart, grid, noise);
    for (int n = 0; n < 5; ++n) {
        solver.step(a, solver.dt_bound());
        solver.step_reference(b, solver.dt_bound());
    }
    CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0);
}

TEST_CASE("fokker-planck velocity reduces to the drift where P is uniform")
{
    const auto chart = make_rigid_body_chart();
    const Grid2D grid(32, 32, 1.0, 1.5);
    const NoiseSpec noise{0.1, 0.1};
    const auto zf = fp_velocity(uniform_density(grid), chart, noise);
    CHECK(zf.floored_cells == 0);
    for (int j = 0; j < grid.nz; ++j)
        for (int i = 0; i < grid.nchi; ++i) {
            const auto u = canonical_velocity(chart, grid.chi_center(i), grid.z_center(j));
            CHECK(zf.z_chi[grid.index(i, j)] == u[0]);
            CHECK(zf.z_z[grid.index(i, j)] == u[1]);
        }
}

TEST_CASE("without diffusion the fokker-planck velocity is pure drift")
{
    const auto chart = make_rigid_body_chart();
    const Grid2D grid(16, 16, 1.0, 1.5);
    const auto p = density_from_function(grid, [](double chi, double z) {
        return std::exp(chi - z);
    });
    const auto zf = fp_velocity(p, chart, NoiseSpec{0.0, 0.0});
    for (int j = 0; j < grid.nz; ++j)
        for (int i = 0; i < grid.nchi; ++i) {
            const auto u = canonical_velocity(chart, grid.chi_center(i), grid.z_center(j));
            CHECK(zf.z_chi[grid.index(i, j)] == u[0]);
            CHECK(zf.z_z[grid.index(i, j)] == u[1]);
        }
}

TEST_CASE("the gaussian fokker-planck velocity matches the log gradient")
{
    // Z_z = (D_z/2) z / s^2 for a centered gaussian and constant H.
    const double s = 0.8;
    const Grid2D grid(16, 128, 0.5, 4.0);
    const auto chart = make_constant_chart(0.5, 4.0);
    const NoiseSpec noise{0.0, 0.3};
    const auto p = density_from_function(grid, [s](double, double z) {
        return std::exp(-0.5 * z * z / (s * s));
    });
    const auto zf = fp_velocity(p, chart, noise);
    for (int j = 8; j < grid.nz - 8; ++j) {
        const double z = grid.z_center(j);
        const double expected = 0.5 * noise.d_z * z / (s * s);
        CHECK(zf.z_z[grid.index(8, j)] == doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("cells under the log floor are flagged")
{
    const Grid2D grid(16, 16, 1.0, 1.5);
    DensityField2D p(grid);
    for (int j = 0; j < 8; ++j)
        for (int i = 0; i < grid.nchi; ++i) p.at(i, j) = 1.0;
    p.normalize();
    const auto zf = fp_velocity(p, make_rigid_body_chart(), NoiseSpec{0.1, 0.1});
    CHECK(zf.floored_cells == 16 * 8);
}
