#include "imdiff/dynamics.hpp"

#include <cmath>

#include "imdiff/errors.hpp"

namespace imdiff {

ConstrainedSystem3D rigid_body_system(std::array<double, 3> inertia)
{
    ConstrainedSystem3D sys;
    sys.inertia = inertia;
    sys.lambda = [](Vec3) { return 1.0; };
    sys.casimir = [](Vec3 p) { return 0.5 * dot(p, p); };
    sys.hamiltonian = [inertia](Vec3 p) {
        return 0.5 * (p.x * p.x / inertia[0] + p.y * p.y / inertia[1] + p.z * p.z / inertia[2]);
    };
    sys.grad_casimir = [](Vec3 p) { return p; };
    sys.grad_hamiltonian = [inertia](Vec3 p) {
        return Vec3{p.x / inertia[0], p.y / inertia[1], p.z / inertia[2]};
    };
    return sys;
}

ConstrainedSystem3D distorted_rigid_body_system(std::array<double, 3> inertia)
{
    ConstrainedSystem3D sys = rigid_body_system(inertia);
    sys.lambda = [](Vec3 p) { return std::exp(0.5 * p.z * p.z); };
    return sys;
}

double fd_step(Vec3 p)
{
    return 1e-4 * std::max(1.0, max_abs(p));
}

Vec3 fd_gradient(const ScalarField3D& f, Vec3 p, double h)
{
    const double gx = (f({p.x + h, p.y, p.z}) - f({p.x - h, p.y, p.z})) / (2.0 * h);
    const double gy = (f({p.x, p.y + h, p.z}) - f({p.x, p.y - h, p.z})) / (2.0 * h);
    const double gz = (f({p.x, p.y, p.z + h}) - f({p.x, p.y, p.z - h})) / (2.0 * h);
    return {gx, gy, gz};
}

namespace {

Vec3 eval_gradient(const ScalarField3D& f, const GradientField3D& g, Vec3 p, const char* name)
{
    Vec3 out = g ? g(p) : fd_gradient(f, p, fd_step(p));
    if (!finite(out)) throw EvaluationError(std::string(name) + " gradient evaluated non-finite");
    return out;
}

double eval_lambda(const ConstrainedSystem3D& sys, Vec3 p)
{
    const double lam = sys.lambda ? sys.lambda(p) : 1.0;
    if (!std::isfinite(lam)) throw EvaluationError("lambda evaluated non-finite");
    if (lam <= 0.0) throw EvaluationError("lambda must be positive");
    return lam;
}

/// Kernel vector xi = lambda * grad(C).
Vec3 kernel_vector(const ConstrainedSystem3D& sys, Vec3 p)
{
    return eval_lambda(sys, p) * eval_gradient(sys.casimir, sys.grad_casimir, p, "casimir");
}

} // namespace

Vec3 poisson_velocity(const ConstrainedSystem3D& sys, Vec3 p)
{
    if (!finite(p)) throw EvaluationError("poisson_velocity: point is not finite");
    const Vec3 gc = eval_gradient(sys.casimir, sys.grad_casimir, p, "casimir");
    const Vec3 gh = eval_gradient(sys.hamiltonian, sys.grad_hamiltonian, p, "hamiltonian");
    return eval_lambda(sys, p) * cross(gc, gh);
}

double topological_residual(const ConstrainedSystem3D& sys, Vec3 p)
{
    return dot(kernel_vector(sys, p), poisson_velocity(sys, p));
}

double helicity_residual(const GradientField3D& w, Vec3 p, double h)
{
    const Vec3 dwx = (1.0 / (2.0 * h)) * (w({p.x + h, p.y, p.z}) - w({p.x - h, p.y, p.z}));
    const Vec3 dwy = (1.0 / (2.0 * h)) * (w({p.x, p.y + h, p.z}) - w({p.x, p.y - h, p.z}));
    const Vec3 dwz = (1.0 / (2.0 * h)) * (w({p.x, p.y, p.z + h}) - w({p.x, p.y, p.z - h}));
    const Vec3 curl{dwy.z - dwz.y, dwz.x - dwx.z, dwx.y - dwy.x};
    return dot(w(p), curl);
}

double jacobi_residual(const ConstrainedSystem3D& sys, Vec3 p, double h)
{
    const GradientField3D w = [&sys](Vec3 q) { return kernel_vector(sys, q); };
    return helicity_residual(w, p, h > 0.0 ? h : fd_step(p));
}

double liouville_residual(const ConstrainedSystem3D& sys, Vec3 p, double h)
{
    const ScalarField3D jac = [&sys](Vec3 q) { return 1.0 / eval_lambda(sys, q); };
    return liouville_residual(sys, jac, p, h);
}

double liouville_residual(const ConstrainedSystem3D& sys, const ScalarField3D& jac, Vec3 p,
                          double h)
{
    const auto jv = [&](Vec3 q) { return jac(q) * poisson_velocity(sys, q); };
    if (h <= 0.0) h = fd_step(p);
    const double dx = (jv({p.x + h, p.y, p.z}).x - jv({p.x - h, p.y, p.z}).x) / (2.0 * h);
    const double dy = (jv({p.x, p.y + h, p.z}).y - jv({p.x, p.y - h, p.z}).y) / (2.0 * h);
    const double dz = (jv({p.x, p.y, p.z + h}).z - jv({p.x, p.y, p.z - h}).z) / (2.0 * h);
    return dx + dy + dz;
}

CanonicalCoords to_canonical(Vec3 p)
{
    if (p.x == 0.0 && p.y == 0.0)
        throw EvaluationError("to_canonical: coordinate singularity at x = y = 0");
    CanonicalCoords q;
    q.c = 0.5 * dot(p, p);
    q.chi = std::exp(-0.5 * p.z * p.z) * std::atan2(p.y, p.x);
    q.z = p.z;
    return q;
}

Vec3 from_canonical(CanonicalCoords q, Branch branch)
{
    const double rho2 = 2.0 * q.c - q.z * q.z;
    if (rho2 <= 0.0)
        throw EvaluationError("from_canonical: z^2 must be below 2C");
    const double rho = std::sqrt(rho2);
    const double phi = q.chi * std::exp(0.5 * q.z * q.z);
    const double s = (branch == Branch::positive_x) ? 1.0 : -1.0;
    return {s * rho * std::cos(phi), s * rho * std::sin(phi), q.z};
}

OrbitResult integrate_orbit(const ConstrainedSystem3D& sys, Vec3 p0, double dt, int steps)
{
    if (!std::isfinite(dt * steps) || steps < 0)
        throw ConfigError("integrate_orbit: dt*steps must be finite");

    OrbitResult out;
    out.points.reserve(static_cast<size_t>(steps) + 1);
    out.points.push_back(p0);

    Vec3 p = p0;
    for (int n = 0; n < steps; ++n) {
        const Vec3 k1 = poisson_velocity(sys, p);
        const Vec3 k2 = poisson_velocity(sys, p + (0.5 * dt) * k1);
        const Vec3 k3 = poisson_velocity(sys, p + (0.5 * dt) * k2);
        const Vec3 k4 = poisson_velocity(sys, p + dt * k3);
        p = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.points.push_back(p);
    }

    const double c0 = sys.casimir(p0), c1 = sys.casimir(p);
    const double h0 = sys.hamiltonian(p0), h1 = sys.hamiltonian(p);
    out.casimir_drift_rel = std::abs(c1 - c0) / std::max(std::abs(c0), 1e-300);
    out.energy_drift_rel = std::abs(h1 - h0) / std::max(std::abs(h0), 1e-300);
    return out;
}

} // namespace imdiff
