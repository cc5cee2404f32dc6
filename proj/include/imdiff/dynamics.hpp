#pragma once

#include <array>
#include <functional>
#include <vector>

#include "imdiff/vec3.hpp"

namespace imdiff {

using ScalarField3D = std::function<double(Vec3)>;
using GradientField3D = std::function<Vec3(Vec3)>;

/// A 3D noncanonical Hamiltonian system whose phase-space velocity is
/// v = lambda * grad(C) x grad(H).  lambda is the integration factor of the
/// kernel vector xi = lambda*grad(C), C the Casimir invariant and H the
/// energy.  Analytic gradients are optional; central differences are used
/// when they are absent.
struct ConstrainedSystem3D {
    ScalarField3D lambda;
    ScalarField3D casimir;
    ScalarField3D hamiltonian;
    std::array<double, 3> inertia{1.0, 2.0, 3.0};

    GradientField3D grad_casimir;     // optional
    GradientField3D grad_hamiltonian; // optional
};

/// Euler top with C = |x|^2/2, H = (x^2/Ix + y^2/Iy + z^2/Iz)/2, lambda = 1.
ConstrainedSystem3D rigid_body_system(std::array<double, 3> inertia = {1.0, 2.0, 3.0});

/// Same body with the anisotropic rotation factor lambda = exp(z^2/2).
ConstrainedSystem3D distorted_rigid_body_system(std::array<double, 3> inertia = {1.0, 2.0, 3.0});

/// Central-difference step for point evaluations: h = 1e-4 * local extent.
double fd_step(Vec3 p);

/// Central-difference gradient of a scalar field.
Vec3 fd_gradient(const ScalarField3D& f, Vec3 p, double h);

/// Phase-space velocity lambda * grad(C) x grad(H) at p.
/// Throws EvaluationError if any field evaluates non-finite or lambda <= 0.
Vec3 poisson_velocity(const ConstrainedSystem3D& sys, Vec3 p);

/// xi . v with xi = lambda*grad(C).  Zero (to rounding) for any Hamiltonian
/// by antisymmetry of the Poisson operator.
double topological_residual(const ConstrainedSystem3D& sys, Vec3 p);

/// Helicity density w . (curl w) of a kernel candidate field, with the curl
/// taken by central differences of step h.  Zero iff the kernel is
/// integrable.
double helicity_residual(const GradientField3D& w, Vec3 p, double h);

/// Helicity residual of the system kernel w = lambda*grad(C); h = 0 selects
/// the default step rule.
double jacobi_residual(const ConstrainedSystem3D& sys, Vec3 p, double h = 0.0);

/// div(J*v) with J = 1/lambda, by central differences.  Vanishes when J dV
/// is an invariant measure of the flow.  h = 0 selects the default step.
double liouville_residual(const ConstrainedSystem3D& sys, Vec3 p, double h = 0.0);

/// Same residual with a caller-supplied measure weight (negative control:
/// a wrong J produces a nonzero residual).
double liouville_residual(const ConstrainedSystem3D& sys, const ScalarField3D& jac, Vec3 p,
                          double h = 0.0);

struct CanonicalCoords {
    double c = 0.0;   // Casimir level |p|^2/2
    double chi = 0.0; // exp(-z^2/2) * angle(y, x)
    double z = 0.0;
};

enum class Branch { positive_x, negative_x };

/// (x,y,z) -> (C, chi, z).  The angle is the full-plane two-argument angle
/// in (-pi, pi].  Throws EvaluationError at the coordinate singularity
/// x = y = 0.
CanonicalCoords to_canonical(Vec3 p);

/// Inverse map on the principal branch; `branch` selects the mirrored
/// half-plane for the single-argument arctan convention.  Requires
/// z^2 < 2C.
Vec3 from_canonical(CanonicalCoords q, Branch branch = Branch::positive_x);

struct OrbitResult {
    std::vector<Vec3> points;  // steps+1 samples including the start
    double casimir_drift_rel = 0.0;
    double energy_drift_rel = 0.0;
};

/// Fixed-step RK4 integration of poisson_velocity; reports the relative
/// drift of C and H over the run.
OrbitResult integrate_orbit(const ConstrainedSystem3D& sys, Vec3 p0, double dt, int steps);

} // namespace imdiff
