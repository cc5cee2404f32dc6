#pragma once

#include <vector>

#include "imdiff/entropy.hpp"

namespace imdiff {

/// Point dipole in cylindrical coordinates (r, z): flux function
/// psi = M r^2 / (r^2+z^2)^{3/2}, field strength B = |grad psi| / r.
/// Carries the spatial sample grid used for moment maps.
struct DipoleGeometry {
    double moment = 1.0;
    double r_min = 1.0;
    double r_max = 5.0;
    double z_min = -2.0;
    double z_max = 2.0;
    int nr = 64;
    int nz = 64;

    double r_center(int i) const { return r_min + (i + 0.5) * (r_max - r_min) / nr; }
    double z_center(int j) const { return z_min + (j + 0.5) * (z_max - z_min) / nz; }
};

/// psi(r, z); throws ConfigError for r <= 0.
double flux_function(const DipoleGeometry& geom, double r, double z);

/// B(r, z) from the analytic gradient of psi.
double field_strength(const DipoleGeometry& geom, double r, double z);

/// Measure weight relating dV_I = B dV; equals field_strength.
double measure_jacobian(const DipoleGeometry& geom, double r, double z);

/// Equatorial field strength on the flux surface psi: B = psi^3 / M^2.
double equatorial_b(const DipoleGeometry& geom, double psi);

/// Distribution P(psi, mu, v_par) on the invariant measure, diffusing in psi
/// at fixed (mu, v_par).  Storage is slice-major: the psi profile of each
/// (mu, v_par) slice is contiguous.
struct MagnetoState {
    double psi_min = 0.2, psi_max = 1.0;
    int npsi = 128;
    double mu_max = 10.0;
    int nmu = 32;
    double v_max = 5.0;
    int nv = 32;
    double particle_mass = 1.0;
    double d_psi = 0.05;

    std::vector<double> p;

    double dpsi() const { return (psi_max - psi_min) / npsi; }
    double dmu() const { return mu_max / nmu; }
    double dv() const { return 2.0 * v_max / nv; }
    double cell_volume() const { return dpsi() * dmu() * dv(); }

    double psi_center(int i) const { return psi_min + (i + 0.5) * dpsi(); }
    double mu_center(int k) const { return (k + 0.5) * dmu(); }
    double v_center(int l) const { return -v_max + (l + 0.5) * dv(); }

    int slices() const { return nmu * nv; }
    size_t index(int i, int k, int l) const
    {
        return (static_cast<size_t>(k) * nv + l) * npsi + i;
    }

    double mass() const;
    void normalize();
};

/// Maxwell-Boltzmann start: P = exp(-(mu B_eq(psi) + m v^2/2)/T) / B_eq(psi),
/// normalized to unit mass.
MagnetoState maxwell_boltzmann_state(const DipoleGeometry& geom, const MagnetoState& shape,
                                     double temperature);

/// Largest stable explicit step for the psi diffusion.
double magneto_stable_dt(const MagnetoState& state);

/// One explicit step of dP/dt = (D_psi/2) d2P/dpsi2 with no-flux ends,
/// applied independently per (mu, v_par) slice (OpenMP over slices).
void diffuse(MagnetoState& state, double dt);

/// Serial reference path; must match diffuse bitwise.
void diffuse_reference(MagnetoState& state, double dt);

/// Marginals over everything but mu (resp. v_par); exact invariants of
/// diffuse.
std::vector<double> mu_marginal(const MagnetoState& state);
std::vector<double> v_marginal(const MagnetoState& state);

struct MomentMaps {
    DipoleGeometry geom;
    std::vector<double> density;     // nr x nz, row-major in z rows
    std::vector<double> t_perp;
    std::vector<double> t_par;
    std::vector<char> valid;         // 0 where psi(r,z) leaves the simulated range

    int index(int i, int j) const { return j * geom.nr + i; }
};

/// Configuration-space maps: n = B * integral of P over (mu, v_par),
/// T_perp = B <mu>, T_par = m <v_par^2>, evaluated at psi(r, z).
MomentMaps moments(const MagnetoState& state, const DipoleGeometry& geom);

struct MagnetoEntropies {
    double sigma = 0.0;
    double tilde = 0.0;
};

/// Sigma on the invariant measure and S-tilde = Sigma - <ln B_eq(psi)>.
MagnetoEntropies magneto_entropies(const MagnetoState& state, const DipoleGeometry& geom);

/// Entropy production of the psi diffusion (direct and Fisher forms).
double magneto_production_direct(const MagnetoState& state);
double magneto_production_fisher(const MagnetoState& state);

struct MagnetoRunResult {
    EntropyTrace trace;
    MagnetoState final_state;
};

/// Advances the state to t_end, recording the entropy diagnostics at the
/// given snapshot cadence.
MagnetoRunResult magneto_solve(const MagnetoState& initial, const DipoleGeometry& geom,
                               double t_end, int snapshot_stride = 0);

} // namespace imdiff
