#pragma once

#include <functional>
#include <vector>

#include "imdiff/chart.hpp"
#include "imdiff/entropy.hpp"
#include "imdiff/grid.hpp"
#include "imdiff/noise.hpp"

namespace imdiff {

/// Measure weight of the chart, J(z) = exp(-z^2/2): dV_I = J dV.
double chart_jacobian(double z);

JacobianField chart_jacobian_field(const Grid2D& grid);

enum class Boundary { no_flux };

struct SolverConfig {
    double dt = 0.0;          // 0 selects the stability-rule step
    double t_end = 20.0;
    int snapshot_stride = 0;  // steps between diagnostics rows; 0 -> ~200 rows
    Boundary boundary = Boundary::no_flux;
};

/// Face-normal drift velocities on the staggered grid, derived from corner
/// values of the clipped streamfunction max(H, cap).  Differencing a
/// streamfunction makes the discrete divergence vanish identically in every
/// cell, and the clipping puts all four walls inside a plateau so the
/// boundary faces carry no advective flux.
struct FaceVelocity {
    Grid2D grid;
    std::vector<double> u_chi; // (nchi+1) x nz, index j*(nchi+1)+i
    std::vector<double> u_z;   // nchi x (nz+1), index j*nchi+i
    double max_speed = 0.0;

    double uchi(int i, int j) const { return u_chi[j * (grid.nchi + 1) + i]; }
    double uz(int i, int j) const { return u_z[j * grid.nchi + i]; }
};

FaceVelocity face_velocity(const CanonicalChart& chart, const Grid2D& grid);

/// Largest stable explicit step: 0.9 * min(h^2/(2(D_chi+D_z)), 0.5 h/max|u|)
/// with h the smaller cell size.
double stable_dt(const Grid2D& grid, const NoiseSpec& noise, double max_speed);

/// Conservative finite-volume solver for
///   dP/dt = H_z dP/dchi - H_chi dP/dz + (D_chi/2) d2P/dchi2 + (D_z/2) d2P/dz2
/// with no-flux walls.  Advective face values use van-Leer-limited upwind
/// reconstruction; diffusion is second-order central.
class FPSolver {
public:
    FPSolver(const CanonicalChart& chart, const Grid2D& grid, const NoiseSpec& noise);

    /// One explicit step (OpenMP parallel over rows).  Throws ConfigError if
    /// dt violates the stability bound, SolverFault if the density leaves
    /// [-1e-14, inf) afterwards.
    void step(DensityField2D& p, double dt) const;

    /// Serial reference path; must match step() bitwise.
    void step_reference(DensityField2D& p, double dt) const;

    const FaceVelocity& faces() const { return faces_; }
    double dt_bound() const { return dt_bound_; }
    const NoiseSpec& noise() const { return noise_; }

private:
    void apply(DensityField2D& p, double dt, bool parallel) const;

    Grid2D grid_;
    NoiseSpec noise_;
    FaceVelocity faces_;
    double dt_bound_ = 0.0;

    // Scratch for the face fluxes and the updated field; the solver is
    // exclusively owned while stepping, so plain mutable buffers suffice.
    mutable std::vector<double> flux_chi_, flux_z_, next_;
};

/// Single-step convenience wrapper around FPSolver.
DensityField2D fp_step(const DensityField2D& p, const CanonicalChart& chart,
                       const NoiseSpec& noise, double dt);

struct FPSnapshot {
    double t = 0.0;
    DensityField2D p;
};

struct FPResult {
    std::vector<FPSnapshot> snapshots;
    EntropyTrace trace;
};

/// Advances p0 to t_end, recording density snapshots and the entropy
/// diagnostics (Sigma, S-tilde with the chart measure weight, both
/// production forms, boundary flow, mass) every snapshot stride.
FPResult fp_solve(const DensityField2D& p0, const CanonicalChart& chart,
                  const NoiseSpec& noise, const SolverConfig& cfg);

using DriftField = std::function<std::array<double, 2>(double, double)>;

struct FPVelocityField {
    Grid2D grid;
    std::vector<double> z_chi; // cell-centered components
    std::vector<double> z_z;
    int floored_cells = 0; // cells evaluated with the log floor
};

/// Fokker-Planck velocity Z = (u_chi - (D_chi/2) dlnP/dchi,
///                             u_z  - (D_z/2)  dlnP/dz)
/// with the Hamiltonian drift u = (-H_z, H_chi) from the chart.
FPVelocityField fp_velocity(const DensityField2D& p, const CanonicalChart& chart,
                            const NoiseSpec& noise);

/// Same with a caller-supplied drift (e.g. the solver's effective drift).
FPVelocityField fp_velocity(const DensityField2D& p, const DriftField& drift,
                            const NoiseSpec& noise);

} // namespace imdiff
