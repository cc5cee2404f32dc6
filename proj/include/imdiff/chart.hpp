#pragma once

#include <array>
#include <functional>
#include <vector>

namespace imdiff {

using ScalarField2D = std::function<double(double, double)>;

/// The 2D symplectic chart (chi, z) at a fixed Casimir level C, carrying the
/// reduced Hamiltonian H(chi, z).  The chart Jacobian relating the invariant
/// measure to the Cartesian one is exp(-z^2/2).
///
/// For the rigid body the reduced Hamiltonian is obtained by substituting
/// x = rho*cos(phi), y = rho*sin(phi) with rho^2 = 2C - z^2 and
/// phi = chi*exp(z^2/2) into the 3D energy:
///   H(chi, z) = [rho^2 (cos^2(phi)/Ix + sin^2(phi)/Iy) + z^2/Iz] / 2.
struct CanonicalChart {
    double c_value = 2.0;
    double chi_max = 1.0;
    double z_max = 1.5;

    ScalarField2D h;                                            // required
    std::function<std::array<double, 2>(double, double)> grad_h; // optional (H_chi, H_z)

    bool contains(double chi, double z) const
    {
        return chi >= -chi_max && chi <= chi_max && z >= -z_max && z <= z_max;
    }
};

/// Chart for the distorted rigid body.  Requires z_max^2 < 2C.
CanonicalChart make_rigid_body_chart(std::array<double, 3> inertia = {1.0, 2.0, 3.0},
                                     double c_value = 2.0,
                                     double chi_max = 1.0,
                                     double z_max = 1.5);

/// Chart with a constant Hamiltonian (pure-diffusion configurations).
CanonicalChart make_constant_chart(double chi_max, double z_max, double h0 = 0.0);

std::array<double, 2> chart_gradient(const CanonicalChart& chart, double chi, double z);

/// Hamiltonian drift (d(chi)/dt, dz/dt) = (-H_z, H_chi).  Throws ConfigError
/// outside the chart rectangle.
std::array<double, 2> canonical_velocity(const CanonicalChart& chart, double chi, double z);

/// Level H_cap such that every boundary point of the rectangle satisfies
/// H <= H_cap.  Clipping the advective streamfunction at this level turns
/// the walls into streamlines, which is what a no-flux advection scheme on
/// the rectangle requires: contours of H itself cross the walls.
double advective_cap(const CanonicalChart& chart);

/// Drift actually used by the solver and the particle oracle: the Hamiltonian
/// drift where H exceeds the cap, zero in the wall plateau.
struct EffectiveDrift {
    const CanonicalChart* chart = nullptr;
    double cap = 0.0;

    std::array<double, 2> operator()(double chi, double z) const
    {
        if (chart->h(chi, z) <= cap) return {0.0, 0.0};
        const auto g = chart_gradient(*chart, chi, z);
        return {-g[1], g[0]};
    }
};

EffectiveDrift make_effective_drift(const CanonicalChart& chart);

struct ChartOrbitResult {
    std::vector<std::array<double, 2>> points; // (chi, z) samples
    double energy_drift_rel = 0.0;
    bool truncated = false; // left the chart rectangle; trailing steps dropped
};

/// Fixed-step RK4 integration of the chart drift.
ChartOrbitResult integrate_orbit(const CanonicalChart& chart,
                                 std::array<double, 2> q0, double dt, int steps);

} // namespace imdiff
