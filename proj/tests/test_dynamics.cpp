#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "imdiff/dynamics.hpp"
#include "imdiff/errors.hpp"

using namespace imdiff;

namespace {

std::mt19937 gen(20240911);

Vec3 random_point(double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(gen), u(gen), u(gen)};
}

} // namespace

TEST_CASE("spin about a principal axis is a fixed point")
{
    const auto sys = rigid_body_system();
    const Vec3 v = poisson_velocity(sys, {1.0, 0.0, 0.0});
    CHECK(v.x == 0.0);
    CHECK(v.y == 0.0);
    CHECK(v.z == 0.0);
}

TEST_CASE("poisson velocity matches the hand-evaluated cross product")
{
    // x x (x/Ix, y/Iy, z/Iz) at (0,1,1) with I=(1,2,3) is (1/3 - 1/2, 0, 0).
    const auto sys = rigid_body_system({1.0, 2.0, 3.0});
    const Vec3 v = poisson_velocity(sys, {0.0, 1.0, 1.0});
    CHECK(v.x == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
    CHECK(v.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(v.z == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("distortion factor is the identity on the z = 0 plane")
{
    const auto plain = rigid_body_system();
    const auto distorted = distorted_rigid_body_system();
    for (int k = 0; k < 20; ++k) {
        Vec3 p = random_point(-2.0, 2.0);
        p.z = 0.0;
        const Vec3 a = poisson_velocity(plain, p);
        const Vec3 b = poisson_velocity(distorted, p);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
        CHECK(a.z == b.z);
    }
}

TEST_CASE("non-finite field evaluation reports the offending field")
{
    auto sys = rigid_body_system();
    sys.hamiltonian = [](Vec3) { return std::nan(""); };
    sys.grad_hamiltonian = [](Vec3) { return Vec3{std::nan(""), 0.0, 0.0}; };
    CHECK_THROWS_WITH_AS(poisson_velocity(sys, {1.0, 0.0, 0.0}),
                         doctest::Contains("hamiltonian"), EvaluationError);

    auto bad_lambda = rigid_body_system();
    bad_lambda.lambda = [](Vec3) { return -1.0; };
    CHECK_THROWS_AS(poisson_velocity(bad_lambda, {1.0, 0.0, 0.0}), EvaluationError);
}

TEST_CASE("topological residual vanishes by antisymmetry")
{
    const auto sys = rigid_body_system();
    const Vec3 p{0.3, -1.2, 0.7};
    const Vec3 xi = p; // lambda = 1, grad C = x
    const Vec3 v = poisson_velocity(sys, p);
    CHECK(std::abs(topological_residual(sys, p)) <= 1e-12 * norm(xi) * norm(v));
}

TEST_CASE("topological residual stays below 1e-12 relative at random points")
{
    const auto sys = distorted_rigid_body_system();
    for (int k = 0; k < 100; ++k) {
        const Vec3 p = random_point(-2.0, 2.0);
        const double lam = std::exp(0.5 * p.z * p.z);
        const Vec3 v = poisson_velocity(sys, p);
        const double scale = lam * norm(p) * norm(v);
        CHECK(std::abs(topological_residual(sys, p)) <= 1e-12 * std::max(scale, 1e-30));
    }
}

TEST_CASE("a corrupted velocity breaks the topological constraint linearly")
{
    const auto sys = distorted_rigid_body_system();
    const Vec3 p{0.8, -0.4, 0.9};
    const double eps = 1e-3;
    const Vec3 xi = std::exp(0.5 * p.z * p.z) * p;
    const Vec3 v_bad = poisson_velocity(sys, p) + Vec3{0.0, 0.0, eps};
    CHECK(dot(xi, v_bad) == doctest::Approx(eps * xi.z).epsilon(1e-9));
}

TEST_CASE("jacobi residual vanishes for the undistorted kernel w = x")
{
    const auto sys = rigid_body_system();
    for (int k = 0; k < 20; ++k) {
        const Vec3 p = random_point(-2.0, 2.0);
        CHECK(std::abs(jacobi_residual(sys, p)) <= 1e-12);
    }
}

TEST_CASE("jacobi residual of the distorted kernel is truncation-level and O(h^2)")
{
    // Symbolically w.(curl w) = 0 for w = exp(z^2/2) x: the curl is
    // grad(g) x x, which stays orthogonal to w.
    const auto sys = distorted_rigid_body_system();
    for (int k = 0; k < 20; ++k) {
        const Vec3 p = random_point(-2.0, 2.0);
        const double lam = std::exp(0.5 * p.z * p.z);
        const double scale = std::max(1.0, lam * lam * dot(p, p));
        const double r1 = std::abs(jacobi_residual(sys, p, 1e-3));
        const double r2 = std::abs(jacobi_residual(sys, p, 5e-4));
        CHECK(r1 <= 1e-3 * scale);
        if (r1 > 1e-11 * scale) CHECK(r2 <= 0.35 * r1);
    }
}

TEST_CASE("helicity residual flags a non-integrable kernel")
{
    // w = (0, x, 1) has curl (0, 0, 1), so w.(curl w) = 1 everywhere.
    const GradientField3D w = [](Vec3 q) { return Vec3{0.0, q.x, 1.0}; };
    CHECK(helicity_residual(w, {0.7, -0.3, 1.4}, 1e-4) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(helicity_residual(w, {-1.1, 0.2, 0.5}, 1e-4) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("liouville residual vanishes for the flat measure of the rigid body")
{
    const auto sys = rigid_body_system();
    for (int k = 0; k < 20; ++k)
        CHECK(std::abs(liouville_residual(sys, random_point(-2.0, 2.0))) <= 1e-12);
}

TEST_CASE("liouville residual vanishes for the distorted invariant measure")
{
    // J v = grad C x grad H is divergence-free identically.
    const auto sys = distorted_rigid_body_system();
    for (int k = 0; k < 20; ++k) {
        const Vec3 p = random_point(-2.0, 2.0);
        const double h = fd_step(p);
        const double scale = std::max(1.0, dot(p, p));
        CHECK(std::abs(liouville_residual(sys, p)) <= h * h * scale);
    }
}

TEST_CASE("a wrong measure weight produces a nonzero liouville residual")
{
    // With J = 1 the residual is div v = grad(lambda) . (grad C x grad H).
    const auto sys = distorted_rigid_body_system({1.0, 2.0, 3.0});
    const Vec3 p{1.0, 1.0, 1.0};
    const double expected = p.z * std::exp(0.5 * p.z * p.z) * p.x * p.y * (1.0 / 2.0 - 1.0);
    const double r = liouville_residual(sys, [](Vec3) { return 1.0; }, p);
    CHECK(r == doctest::Approx(expected).epsilon(1e-5));
    CHECK(std::abs(r) > 0.1);
}

TEST_CASE("canonical map evaluates the textbook points")
{
    const auto q1 = to_canonical({1.0, 1.0, 0.0});
    CHECK(q1.c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q1.chi == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-15));
    CHECK(q1.z == 0.0);

    const auto q2 = to_canonical({1.0, 0.0, 0.0});
    CHECK(q2.c == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q2.chi == 0.0);
}

TEST_CASE("canonical map rejects the axis singularity and thin shells")
{
    CHECK_THROWS_AS(to_canonical({0.0, 0.0, 1.0}), EvaluationError);
    CHECK_THROWS_AS(from_canonical({0.5, 0.0, 2.0}), EvaluationError); // z^2 >= 2C
}

TEST_CASE("canonical round trip is the identity on the principal branch")
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int tested = 0;
    while (tested < 1000) {
        const Vec3 p{u(gen), u(gen), u(gen)};
        if (p.x * p.x + p.y * p.y < 1e-4) continue;
        ++tested;
        const Vec3 back = from_canonical(to_canonical(p));
        CHECK(norm(back - p) <= 1e-12 * std::max(1.0, norm(p)));
    }
}

TEST_CASE("the mirrored branch flips the half-plane")
{
    const Vec3 p{0.8, 0.5, 0.3};
    const auto q = to_canonical(p);
    const Vec3 mirrored = from_canonical(q, Branch::negative_x);
    CHECK(mirrored.x == doctest::Approx(-p.x).epsilon(1e-12));
    CHECK(mirrored.y == doctest::Approx(-p.y).epsilon(1e-12));
    CHECK(mirrored.z == p.z);
}

TEST_CASE("rk4 orbits conserve the casimir and the energy")
{
    const auto sys = rigid_body_system();
    const auto orbit = integrate_orbit(sys, {0.0, 1.0, 0.01}, 1e-3, 10000);
    CHECK(orbit.casimir_drift_rel < 1e-10);
    CHECK(orbit.energy_drift_rel < 1e-10);
    CHECK(orbit.points.size() == 10001);

    const auto distorted = integrate_orbit(distorted_rigid_body_system(), {0.0, 1.0, 0.01},
                                           1e-3, 10000);
    CHECK(distorted.casimir_drift_rel < 1e-10);
    CHECK(distorted.energy_drift_rel < 1e-10);
}

TEST_CASE("a zero step size yields a constant trajectory")
{
    const auto sys = rigid_body_system();
    const Vec3 p0{0.4, 0.5, 0.6};
    const auto orbit = integrate_orbit(sys, p0, 0.0, 50);
    for (const auto& p : orbit.points) {
        CHECK(p.x == p0.x);
        CHECK(p.y == p0.y);
        CHECK(p.z == p0.z);
    }
}
