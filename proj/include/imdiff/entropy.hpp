#pragma once

#include <vector>

#include "imdiff/grid.hpp"
#include "imdiff/noise.hpp"

namespace imdiff {

/// Time series of the entropy diagnostics along a diffusion run.
/// All ensemble averages are taken with weight P on the invariant measure.
struct EntropyTrace {
    struct Row {
        double t = 0.0;
        double sigma_entropy = 0.0;             // Sigma, entropy on dV_I
        double tilde_entropy = 0.0;             // naive entropy of f = P*J on dV
        double entropy_production_direct = 0.0; // -1/2 sum_d D_d <d^2 lnP / d x_d^2>
        double entropy_production_fisher = 0.0; // Fisher form, nonnegative
        double entropy_flow = 0.0;              // boundary term L
        double mass = 0.0;
    };
    std::vector<Row> rows;
};

/// Floor used when evaluating log P, 1e-12 times the mean density.
double log_floor(const DensityField2D& p);

/// Sigma = -sum P ln(P) dV_I with the log-floor convention.
double sigma_entropy(const DensityField2D& p);

/// Naive entropy of f = P*J on the Cartesian measure dV = dV_I / J.
/// Computed both directly and as Sigma - <ln J>; the two routes must agree
/// to 1e-12 (internal consistency fault otherwise).
double tilde_entropy(const DensityField2D& p, const JacobianField& jac);

struct ProductionDirect {
    double value = 0.0;
    double excluded_mass = 0.0; // probability mass of cells below the floor
    int excluded_cells = 0;
};

/// Entropy production from the second derivatives of ln P, averaged over P.
/// Cells below the log floor are excluded from the average and counted.
ProductionDirect entropy_production_direct(const DensityField2D& p, const NoiseSpec& noise);

/// Equivalent Fisher form, sum over faces of (1/2) D (dP)(d lnP) / h^2 * dA;
/// nonnegative by construction and equal (semi-discretely) to the entropy
/// dissipated by the no-flux diffusion operator.
double entropy_production_fisher(const DensityField2D& p, const NoiseSpec& noise);

/// Outward normal component of the Fokker-Planck velocity on each boundary
/// face.  A no-flux run has all entries zero.
struct WallFlux {
    std::vector<double> left;   // nz entries, outward = -chi
    std::vector<double> right;  // nz entries, outward = +chi
    std::vector<double> bottom; // nchi entries, outward = -z
    std::vector<double> top;    // nchi entries, outward = +z

    static WallFlux zeros(const Grid2D& grid);
};

/// Entropy flow L = -(boundary sum of P lnP Z.n).  Exactly zero for no-flux
/// walls.
double entropy_flow(const DensityField2D& p, const WallFlux& wall_z);

} // namespace imdiff
