#include "imdiff/grid.hpp"

#include <algorithm>
#include <cmath>

#include "imdiff/errors.hpp"

namespace imdiff {

Grid2D::Grid2D(int nchi_, int nz_, double chi_max_, double z_max_)
    : nchi(nchi_), nz(nz_), chi_max(chi_max_), z_max(z_max_)
{
    if (nchi < 8 || nz < 8) throw ConfigError("grid: need at least 8 cells per axis");
    if (chi_max <= 0.0 || z_max <= 0.0) throw ConfigError("grid: extents must be positive");
}

double DensityField2D::mass() const
{
    // Pairwise sum keeps the mass diagnostic itself well below the drift
    // tolerances it is used to check.
    const double a = grid.cell_area();
    std::vector<double> acc(values);
    size_t n = acc.size();
    while (n > 1) {
        const size_t half = (n + 1) / 2;
        for (size_t i = 0; i + half < n; ++i) acc[i] += acc[i + half];
        n = half;
    }
    return (n == 1 ? acc[0] : 0.0) * a;
}

double DensityField2D::min_value() const
{
    return *std::min_element(values.begin(), values.end());
}

double DensityField2D::max_value() const
{
    return *std::max_element(values.begin(), values.end());
}

double DensityField2D::mean_value() const
{
    double s = 0.0;
    for (double v : values) s += v;
    return s / values.size();
}

void DensityField2D::normalize()
{
    const double m = mass();
    if (!(m > 0.0) || !std::isfinite(m))
        throw ConfigError("density: mass must be positive and finite");
    for (double& v : values) v /= m;
}

DensityField2D density_from_function(const Grid2D& grid,
                                     const std::function<double(double, double)>& f)
{
    DensityField2D out(grid);
    for (int j = 0; j < grid.nz; ++j)
        for (int i = 0; i < grid.nchi; ++i) {
            const double v = f(grid.chi_center(i), grid.z_center(j));
            if (!std::isfinite(v) || v < 0.0)
                throw ConfigError("density: initial values must be finite and nonnegative");
            out.at(i, j) = v;
        }
    out.normalize();
    return out;
}

DensityField2D uniform_density(const Grid2D& grid)
{
    DensityField2D out(grid);
    const double v = 1.0 / grid.area();
    std::fill(out.values.begin(), out.values.end(), v);
    return out;
}

JacobianField jacobian_from_function(const Grid2D& grid,
                                     const std::function<double(double, double)>& w)
{
    JacobianField out(grid);
    for (int j = 0; j < grid.nz; ++j)
        for (int i = 0; i < grid.nchi; ++i) {
            const double v = w(grid.chi_center(i), grid.z_center(j));
            if (!std::isfinite(v) || v <= 0.0)
                throw ConfigError("jacobian: weight must be positive and finite");
            out.values[grid.index(i, j)] = v;
        }
    return out;
}

DensityField2D aggregate(const DensityField2D& fine, const Grid2D& coarse)
{
    const Grid2D& fg = fine.grid;
    if (fg.chi_max != coarse.chi_max || fg.z_max != coarse.z_max)
        throw ConfigError("aggregate: grids cover different rectangles");
    if (fg.nchi % coarse.nchi != 0 || fg.nz % coarse.nz != 0)
        throw ConfigError("aggregate: fine grid must be an integer refinement of the coarse one");
    const int kx = fg.nchi / coarse.nchi;
    const int ky = fg.nz / coarse.nz;

    DensityField2D out(coarse);
    for (int j = 0; j < coarse.nz; ++j)
        for (int i = 0; i < coarse.nchi; ++i) {
            double s = 0.0;
            for (int jj = 0; jj < ky; ++jj)
                for (int ii = 0; ii < kx; ++ii) s += fine.at(i * kx + ii, j * ky + jj);
            out.at(i, j) = s / (kx * ky);
        }
    return out;
}

} // namespace imdiff
