#include "imdiff/entropy.hpp"

#include <cmath>

#include "imdiff/errors.hpp"

namespace imdiff {

double log_floor(const DensityField2D& p)
{
    return 1e-12 * p.mean_value();
}

namespace {

double ln_floored(double v, double floor)
{
    return std::log(std::max(v, floor));
}

/// ln P with reflecting ghosts, so that wall stencils see a zero normal
/// gradient, matching the no-flux boundary condition.
double ln_at(const DensityField2D& p, double floor, int i, int j)
{
    const Grid2D& g = p.grid;
    if (i < 0) i = 0;
    if (i >= g.nchi) i = g.nchi - 1;
    if (j < 0) j = 0;
    if (j >= g.nz) j = g.nz - 1;
    return ln_floored(p.at(i, j), floor);
}

} // namespace

double sigma_entropy(const DensityField2D& p)
{
    const double floor = log_floor(p);
    const double a = p.grid.cell_area();
    double s = 0.0;
    for (double v : p.values) s -= v * ln_floored(v, floor);
    return s * a;
}

double tilde_entropy(const DensityField2D& p, const JacobianField& jac)
{
    if (!p.grid.same_as(jac.grid))
        throw ConfigError("tilde_entropy: density and jacobian grids differ");

    const double floor = log_floor(p);
    const double a = p.grid.cell_area();

    // Route 1: -sum f ln(f) dV with f = P*J and dV = dA/J.
    double direct = 0.0;
    // Route 2: Sigma - <ln J>.
    double ln_jac_avg = 0.0;
    for (size_t k = 0; k < p.values.size(); ++k) {
        const double pv = p.values[k];
        const double jv = jac.values[k];
        direct -= (pv * jv) * std::log(std::max(pv, floor) * jv) * (a / jv);
        ln_jac_avg += pv * std::log(jv) * a;
    }
    const double via_sigma = sigma_entropy(p) - ln_jac_avg;

    if (std::abs(direct - via_sigma) > 1e-12 * std::max(1.0, std::abs(direct)))
        throw SolverFault("tilde_entropy: the two quadrature routes disagree");
    return direct;
}

ProductionDirect entropy_production_direct(const DensityField2D& p, const NoiseSpec& noise)
{
    noise.validate();
    const Grid2D& g = p.grid;
    const double floor = log_floor(p);
    const double a = g.cell_area();
    const double inv_dchi2 = 1.0 / (g.dchi() * g.dchi());
    const double inv_dz2 = 1.0 / (g.dz() * g.dz());

    ProductionDirect out;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nchi; ++i) {
            const double pv = p.at(i, j);
            if (pv < floor) {
                out.excluded_mass += pv * a;
                ++out.excluded_cells;
                continue;
            }
            const double lc = ln_floored(pv, floor);
            const double d2chi = (ln_at(p, floor, i + 1, j) - 2.0 * lc + ln_at(p, floor, i - 1, j)) * inv_dchi2;
            const double d2z = (ln_at(p, floor, i, j + 1) - 2.0 * lc + ln_at(p, floor, i, j - 1)) * inv_dz2;
            out.value -= pv * a * 0.5 * (noise.d_chi * d2chi + noise.d_z * d2z);
        }
    return out;
}

double entropy_production_fisher(const DensityField2D& p, const NoiseSpec& noise)
{
    noise.validate();
    const Grid2D& g = p.grid;
    const double floor = log_floor(p);
    const double a = g.cell_area();
    const double c_chi = 0.5 * noise.d_chi * a / (g.dchi() * g.dchi());
    const double c_z = 0.5 * noise.d_z * a / (g.dz() * g.dz());

    double s = 0.0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i + 1 < g.nchi; ++i) {
            const double dp = p.at(i + 1, j) - p.at(i, j);
            const double dl = ln_floored(p.at(i + 1, j), floor) - ln_floored(p.at(i, j), floor);
            s += c_chi * dp * dl;
        }
    for (int j = 0; j + 1 < g.nz; ++j)
        for (int i = 0; i < g.nchi; ++i) {
            const double dp = p.at(i, j + 1) - p.at(i, j);
            const double dl = ln_floored(p.at(i, j + 1), floor) - ln_floored(p.at(i, j), floor);
            s += c_z * dp * dl;
        }
    return s;
}

WallFlux WallFlux::zeros(const Grid2D& grid)
{
    WallFlux w;
    w.left.assign(grid.nz, 0.0);
    w.right.assign(grid.nz, 0.0);
    w.bottom.assign(grid.nchi, 0.0);
    w.top.assign(grid.nchi, 0.0);
    return w;
}

double entropy_flow(const DensityField2D& p, const WallFlux& wall_z)
{
    const Grid2D& g = p.grid;
    if (static_cast<int>(wall_z.left.size()) != g.nz ||
        static_cast<int>(wall_z.right.size()) != g.nz ||
        static_cast<int>(wall_z.bottom.size()) != g.nchi ||
        static_cast<int>(wall_z.top.size()) != g.nchi)
        throw ConfigError("entropy_flow: wall flux arrays do not match the grid");

    const double floor = log_floor(p);
    const auto plogp = [&](int i, int j) {
        const double v = p.at(i, j);
        return v * ln_floored(v, floor);
    };

    double flux_out = 0.0;
    for (int j = 0; j < g.nz; ++j) {
        flux_out += plogp(0, j) * wall_z.left[j] * g.dz();
        flux_out += plogp(g.nchi - 1, j) * wall_z.right[j] * g.dz();
    }
    for (int i = 0; i < g.nchi; ++i) {
        flux_out += plogp(i, 0) * wall_z.bottom[i] * g.dchi();
        flux_out += plogp(i, g.nz - 1) * wall_z.top[i] * g.dchi();
    }
    return -flux_out + 0.0; // avoid -0 in serialized traces
}

} // namespace imdiff
