#include "imdiff/fp_solver.hpp"

#include <algorithm>
#include <cmath>

#include "imdiff/errors.hpp"

namespace imdiff {

double chart_jacobian(double z)
{
    return std::exp(-0.5 * z * z);
}

JacobianField chart_jacobian_field(const Grid2D& grid)
{
    return jacobian_from_function(grid, [](double, double z) { return chart_jacobian(z); });
}

FaceVelocity face_velocity(const CanonicalChart& chart, const Grid2D& grid)
{
    if (grid.chi_max != chart.chi_max || grid.z_max != chart.z_max)
        throw ConfigError("face_velocity: grid rectangle does not match the chart");

    const double cap = advective_cap(chart);
    const int nc = grid.nchi, nz = grid.nz;

    // Clipped streamfunction at cell corners.
    std::vector<double> psi(static_cast<size_t>(nc + 1) * (nz + 1));
    for (int j = 0; j <= nz; ++j)
        for (int i = 0; i <= nc; ++i) {
            const double h = chart.h(grid.chi_corner(i), grid.z_corner(j));
            if (!std::isfinite(h))
                throw EvaluationError("face_velocity: chart hamiltonian evaluated non-finite");
            psi[static_cast<size_t>(j) * (nc + 1) + i] = std::max(h, cap);
        }

    FaceVelocity f;
    f.grid = grid;
    f.u_chi.assign(static_cast<size_t>(nc + 1) * nz, 0.0);
    f.u_z.assign(static_cast<size_t>(nc) * (nz + 1), 0.0);

    const auto at = [&psi, nc](int i, int j) { return psi[static_cast<size_t>(j) * (nc + 1) + i]; };
    double vmax = 0.0;
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i <= nc; ++i) {
            const double u = -(at(i, j + 1) - at(i, j)) / grid.dz();
            f.u_chi[static_cast<size_t>(j) * (nc + 1) + i] = u;
            vmax = std::max(vmax, std::abs(u));
        }
    for (int j = 0; j <= nz; ++j)
        for (int i = 0; i < nc; ++i) {
            const double u = (at(i + 1, j) - at(i, j)) / grid.dchi();
            f.u_z[static_cast<size_t>(j) * nc + i] = u;
            vmax = std::max(vmax, std::abs(u));
        }
    f.max_speed = vmax;
    return f;
}

double stable_dt(const Grid2D& grid, const NoiseSpec& noise, double max_speed)
{
    const double h = std::min(grid.dchi(), grid.dz());
    double bound = HUGE_VAL;
    if (noise.d_chi + noise.d_z > 0.0)
        bound = std::min(bound, h * h / (2.0 * (noise.d_chi + noise.d_z)));
    if (max_speed > 0.0)
        bound = std::min(bound, 0.5 * h / max_speed);
    if (!std::isfinite(bound))
        throw ConfigError("stable_dt: need diffusion or drift to pick a step");
    return 0.9 * bound;
}

namespace {

inline double vanleer_slope(double pm, double p0, double pp, double h)
{
    const double a = (p0 - pm) / h;
    const double b = (pp - p0) / h;
    const double ab = a * b;
    return ab > 0.0 ? 2.0 * ab / (a + b) : 0.0;
}

/// Total flux through the chi-face left of cell (i, j); i in [0, nchi].
/// Reflecting ghosts feed the limiter stencil at the walls.
inline double flux_chi(const DensityField2D& p, const FaceVelocity& f,
                       double half_d, int i, int j)
{
    const Grid2D& g = p.grid;
    if (i == 0 || i == g.nchi) return 0.0;
    const double u = f.uchi(i, j);

    const auto cell = [&](int ii) {
        if (ii < 0) ii = 0;
        if (ii >= g.nchi) ii = g.nchi - 1;
        return p.at(ii, j);
    };

    double pf;
    if (u >= 0.0) {
        const int c = i - 1;
        pf = cell(c) + 0.5 * g.dchi() * vanleer_slope(cell(c - 1), cell(c), cell(c + 1), g.dchi());
    } else {
        const int c = i;
        pf = cell(c) - 0.5 * g.dchi() * vanleer_slope(cell(c - 1), cell(c), cell(c + 1), g.dchi());
    }
    const double diffusive = -half_d * (p.at(i, j) - p.at(i - 1, j)) / g.dchi();
    return u * pf + diffusive;
}

/// Total flux through the z-face below cell (i, j); j in [0, nz].
inline double flux_z(const DensityField2D& p, const FaceVelocity& f,
                     double half_d, int i, int j)
{
    const Grid2D& g = p.grid;
    if (j == 0 || j == g.nz) return 0.0;
    const double u = f.uz(i, j);

    const auto cell = [&](int jj) {
        if (jj < 0) jj = 0;
        if (jj >= g.nz) jj = g.nz - 1;
        return p.at(i, jj);
    };

    double pf;
    if (u >= 0.0) {
        const int c = j - 1;
        pf = cell(c) + 0.5 * g.dz() * vanleer_slope(cell(c - 1), cell(c), cell(c + 1), g.dz());
    } else {
        const int c = j;
        pf = cell(c) - 0.5 * g.dz() * vanleer_slope(cell(c - 1), cell(c), cell(c + 1), g.dz());
    }
    const double diffusive = -half_d * (p.at(i, j) - p.at(i, j - 1)) / g.dz();
    return u * pf + diffusive;
}

} // namespace

FPSolver::FPSolver(const CanonicalChart& chart, const Grid2D& grid, const NoiseSpec& noise)
    : grid_(grid), noise_(noise), faces_(face_velocity(chart, grid))
{
    noise_.validate();
    dt_bound_ = stable_dt(grid_, noise_, faces_.max_speed);
}

void FPSolver::apply(DensityField2D& p, double dt, bool parallel) const
{
    if (!p.grid.same_as(grid_))
        throw ConfigError("fp_step: density grid does not match the solver grid");
    if (!(dt > 0.0) || dt > dt_bound_ * (1.0 + 1e-12))
        throw ConfigError("fp_step: dt violates the stability bound");

    const int nc = grid_.nchi, nz = grid_.nz;
    const double half_dchi = 0.5 * noise_.d_chi;
    const double half_dz = 0.5 * noise_.d_z;

    flux_chi_.resize(static_cast<size_t>(nc + 1) * nz);
    flux_z_.resize(static_cast<size_t>(nc) * (nz + 1));
    next_.resize(p.values.size());
    std::vector<double>& fchi = flux_chi_;
    std::vector<double>& fz = flux_z_;

#pragma omp parallel for if (parallel) schedule(static)
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i <= nc; ++i)
            fchi[static_cast<size_t>(j) * (nc + 1) + i] = flux_chi(p, faces_, half_dchi, i, j);

#pragma omp parallel for if (parallel) schedule(static)
    for (int j = 0; j <= nz; ++j)
        for (int i = 0; i < nc; ++i)
            fz[static_cast<size_t>(j) * nc + i] = flux_z(p, faces_, half_dz, i, j);

#pragma omp parallel for if (parallel) schedule(static)
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i < nc; ++i) {
            const double div =
                (fchi[static_cast<size_t>(j) * (nc + 1) + i + 1] -
                 fchi[static_cast<size_t>(j) * (nc + 1) + i]) / grid_.dchi() +
                (fz[static_cast<size_t>(j + 1) * nc + i] -
                 fz[static_cast<size_t>(j) * nc + i]) / grid_.dz();
            next_[grid_.index(i, j)] = p.at(i, j) - dt * div;
        }
    p.values.swap(next_);

    double mn = p.values[0];
    for (double v : p.values) mn = std::min(mn, v);
    if (mn < -1e-14)
        throw SolverFault("fp_step: density went negative beyond tolerance");
}

void FPSolver::step(DensityField2D& p, double dt) const
{
    apply(p, dt, true);
}

void FPSolver::step_reference(DensityField2D& p, double dt) const
{
    apply(p, dt, false);
}

DensityField2D fp_step(const DensityField2D& p, const CanonicalChart& chart,
                       const NoiseSpec& noise, double dt)
{
    FPSolver solver(chart, p.grid, noise);
    DensityField2D out = p;
    solver.step(out, dt);
    return out;
}

FPResult fp_solve(const DensityField2D& p0, const CanonicalChart& chart,
                  const NoiseSpec& noise, const SolverConfig& cfg)
{
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end))
        throw ConfigError("fp_solve: t_end must be positive and finite");
    if (cfg.snapshot_stride < 0)
        throw ConfigError("fp_solve: snapshot stride must be nonnegative");

    FPSolver solver(chart, p0.grid, noise);

    double dt = cfg.dt > 0.0 ? cfg.dt : solver.dt_bound();
    if (dt > solver.dt_bound() * (1.0 + 1e-12))
        throw ConfigError("fp_solve: dt violates the stability bound");
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end / dt - 1e-12)));
    dt = cfg.t_end / steps; // land on t_end exactly

    long stride = cfg.snapshot_stride;
    if (stride == 0) stride = std::max<long>(1, steps / 200);

    const JacobianField jac = chart_jacobian_field(p0.grid);
    const WallFlux no_flux = WallFlux::zeros(p0.grid);

    FPResult result;
    DensityField2D p = p0;

    const auto record = [&](double t) {
        EntropyTrace::Row row;
        row.t = t;
        row.sigma_entropy = sigma_entropy(p);
        row.tilde_entropy = tilde_entropy(p, jac);
        row.entropy_production_direct = entropy_production_direct(p, noise).value;
        row.entropy_production_fisher = entropy_production_fisher(p, noise);
        row.entropy_flow = entropy_flow(p, no_flux);
        row.mass = p.mass();
        result.trace.rows.push_back(row);
        result.snapshots.push_back({t, p});
    };

    record(0.0);
    for (long n = 1; n <= steps; ++n) {
        solver.step(p, dt);
        if (n % stride == 0 || n == steps) record(n * dt);
    }
    return result;
}

namespace {

FPVelocityField fp_velocity_impl(const DensityField2D& p, const DriftField& drift,
                                 const NoiseSpec& noise)
{
    noise.validate();
    const Grid2D& g = p.grid;
    const double floor = log_floor(p);

    const auto lnp = [&](int i, int j) {
        if (i < 0) i = 0;
        if (i >= g.nchi) i = g.nchi - 1;
        if (j < 0) j = 0;
        if (j >= g.nz) j = g.nz - 1;
        return std::log(std::max(p.at(i, j), floor));
    };

    FPVelocityField out;
    out.grid = g;
    out.z_chi.resize(g.cells());
    out.z_z.resize(g.cells());
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nchi; ++i) {
            if (p.at(i, j) < floor) ++out.floored_cells;
            const auto u = drift(g.chi_center(i), g.z_center(j));
            const double dlchi = (lnp(i + 1, j) - lnp(i - 1, j)) / (2.0 * g.dchi());
            const double dlz = (lnp(i, j + 1) - lnp(i, j - 1)) / (2.0 * g.dz());
            out.z_chi[g.index(i, j)] = u[0] - 0.5 * noise.d_chi * dlchi;
            out.z_z[g.index(i, j)] = u[1] - 0.5 * noise.d_z * dlz;
        }
    return out;
}

} // namespace

FPVelocityField fp_velocity(const DensityField2D& p, const CanonicalChart& chart,
                            const NoiseSpec& noise)
{
    return fp_velocity_impl(
        p,
        [&chart](double chi, double z) { return canonical_velocity(chart, chi, z); },
        noise);
}

FPVelocityField fp_velocity(const DensityField2D& p, const DriftField& drift,
                            const NoiseSpec& noise)
{
    return fp_velocity_impl(p, drift, noise);
}

} // namespace imdiff
