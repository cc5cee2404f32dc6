#pragma once

#include <functional>
#include <vector>

namespace imdiff {

/// Uniform cell-centered rectangular grid on
/// [-chi_max, chi_max] x [-z_max, z_max].
struct Grid2D {
    int nchi = 0;
    int nz = 0;
    double chi_max = 0.0;
    double z_max = 0.0;

    Grid2D() = default;
    Grid2D(int nchi_, int nz_, double chi_max_, double z_max_);

    double dchi() const { return 2.0 * chi_max / nchi; }
    double dz() const { return 2.0 * z_max / nz; }
    double cell_area() const { return dchi() * dz(); }
    double area() const { return 4.0 * chi_max * z_max; }

    double chi_center(int i) const { return -chi_max + (i + 0.5) * dchi(); }
    double z_center(int j) const { return -z_max + (j + 0.5) * dz(); }
    double chi_corner(int i) const { return -chi_max + i * dchi(); }
    double z_corner(int j) const { return -z_max + j * dz(); }

    int cells() const { return nchi * nz; }
    int index(int i, int j) const { return j * nchi + i; }

    bool same_as(const Grid2D& o) const
    {
        return nchi == o.nchi && nz == o.nz && chi_max == o.chi_max && z_max == o.z_max;
    }
};

/// Probability density with respect to the invariant measure d(chi)^d(z),
/// stored at cell centers.
struct DensityField2D {
    Grid2D grid;
    std::vector<double> values;

    DensityField2D() = default;
    explicit DensityField2D(const Grid2D& g) : grid(g), values(g.cells(), 0.0) {}

    double& at(int i, int j) { return values[grid.index(i, j)]; }
    double at(int i, int j) const { return values[grid.index(i, j)]; }

    double mass() const;
    double min_value() const;
    double max_value() const;
    double mean_value() const;

    /// Scales the field to unit mass.  Throws ConfigError on non-positive mass.
    void normalize();
};

/// Samples f at cell centers and normalizes to unit mass.
DensityField2D density_from_function(const Grid2D& grid,
                                     const std::function<double(double, double)>& f);

DensityField2D uniform_density(const Grid2D& grid);

/// Cell-centered positive weight relating the invariant measure to the
/// Cartesian one, dV_I = J dV.  For the distorted rigid body J = exp(-z^2/2);
/// for the magnetosphere J = B.
struct JacobianField {
    Grid2D grid;
    std::vector<double> values;

    JacobianField() = default;
    explicit JacobianField(const Grid2D& g) : grid(g), values(g.cells(), 1.0) {}

    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// Samples a positive weight function at cell centers.
/// Throws ConfigError if the weight is not strictly positive.
JacobianField jacobian_from_function(const Grid2D& grid,
                                     const std::function<double(double, double)>& w);

/// Block-averages a density onto a coarser grid; factor = fine/coarse cell
/// count per axis must be integral.  Mass is preserved exactly.
DensityField2D aggregate(const DensityField2D& fine, const Grid2D& coarse);

} // namespace imdiff
