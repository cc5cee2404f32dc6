#pragma once

#include <cstdint>
#include <vector>

#include "imdiff/chart.hpp"
#include "imdiff/fp_solver.hpp"
#include "imdiff/grid.hpp"
#include "imdiff/noise.hpp"

namespace imdiff {

/// Monte-Carlo ensemble for the noisy canonical equations
///   d(chi) = -H_z dt + sqrt(D_chi) dW_1,  dz = H_chi dt + sqrt(D_z) dW_2
/// on the chart rectangle with reflecting walls.  Each particle owns a
/// counter-based noise stream, so trajectories replay deterministically.
struct ParticleEnsemble {
    std::vector<double> chi;
    std::vector<double> z;
    uint64_t seed = 0;
    uint64_t step_count = 0;
    double chi_max = 0.0;
    double z_max = 0.0;

    size_t size() const { return chi.size(); }
};

/// All particles at one point.
ParticleEnsemble ensemble_at(size_t n, double chi0, double z0,
                             double chi_max, double z_max, uint64_t seed);

/// Particles sampled from a cell-centered density (cell by discrete CDF,
/// uniform within the cell); matches the solver's initial condition exactly.
ParticleEnsemble sample_ensemble(const DensityField2D& p0, size_t n, uint64_t seed);

/// One Euler-Maruyama step (OpenMP parallel over particles).
void em_step(ParticleEnsemble& ens, const EffectiveDrift& drift,
             const NoiseSpec& noise, double dt);

/// Serial reference path; must match em_step bitwise.
void em_step_reference(ParticleEnsemble& ens, const EffectiveDrift& drift,
                       const NoiseSpec& noise, double dt);

/// Drift-free overload for pure-diffusion checks.
void em_step(ParticleEnsemble& ens, const NoiseSpec& noise, double dt);

/// Cell-count histogram normalized into a density on the invariant measure.
DensityField2D histogram_density(const ParticleEnsemble& ens, const Grid2D& grid);

/// L1 distance between two densities on the same grid,
/// sum |a - b| * cell_area (in [0, 2]).
double l1_distance(const DensityField2D& a, const DensityField2D& b);

/// L1 between a particle histogram and a solver density at matching times.
/// The solver grid must be an integer refinement of the histogram grid; the
/// density is block-averaged before comparing.  Throws ConfigError on
/// mismatched rectangles or a non-integral refinement factor.
std::vector<double> compare_to_fp(const std::vector<DensityField2D>& histograms,
                                  const std::vector<DensityField2D>& fp_snapshots);

} // namespace imdiff
