#include "imdiff/sde.hpp"

#include <algorithm>
#include <cmath>

#include "imdiff/errors.hpp"
#include "imdiff/rng.hpp"

namespace imdiff {

namespace {

double reflect_into(double x, double lo, double hi)
{
    // Fold until inside; a step never overshoots by more than a few widths.
    while (x < lo || x > hi) {
        if (x < lo) x = 2.0 * lo - x;
        if (x > hi) x = 2.0 * hi - x;
    }
    return x;
}

} // namespace

ParticleEnsemble ensemble_at(size_t n, double chi0, double z0,
                             double chi_max, double z_max, uint64_t seed)
{
    if (chi_max <= 0.0 || z_max <= 0.0)
        throw ConfigError("ensemble: domain extents must be positive");
    if (std::abs(chi0) > chi_max || std::abs(z0) > z_max)
        throw ConfigError("ensemble: start point outside the rectangle");
    ParticleEnsemble ens;
    ens.chi.assign(n, chi0);
    ens.z.assign(n, z0);
    ens.seed = seed;
    ens.chi_max = chi_max;
    ens.z_max = z_max;
    return ens;
}

ParticleEnsemble sample_ensemble(const DensityField2D& p0, size_t n, uint64_t seed)
{
    const Grid2D& g = p0.grid;

    std::vector<double> cdf(p0.values.size());
    double acc = 0.0;
    for (size_t k = 0; k < p0.values.size(); ++k) {
        if (p0.values[k] < 0.0) throw ConfigError("sample_ensemble: density must be nonnegative");
        acc += p0.values[k];
        cdf[k] = acc;
    }
    if (!(acc > 0.0)) throw ConfigError("sample_ensemble: density has no mass");
    for (double& c : cdf) c /= acc;

    ParticleEnsemble ens;
    ens.chi.resize(n);
    ens.z.resize(n);
    ens.seed = seed;
    ens.chi_max = g.chi_max;
    ens.z_max = g.z_max;

#pragma omp parallel for schedule(static)
    for (long k = 0; k < static_cast<long>(n); ++k) {
        uint64_t state = rng::stream_key(seed, static_cast<uint64_t>(k), 0);
        const double u = rng::uniform(state);
        const size_t cell = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        const int i = static_cast<int>(cell) % g.nchi;
        const int j = static_cast<int>(cell) / g.nchi;
        ens.chi[k] = g.chi_corner(i) + rng::uniform(state) * g.dchi();
        ens.z[k] = g.z_corner(j) + rng::uniform(state) * g.dz();
    }
    return ens;
}

namespace {

void em_apply(ParticleEnsemble& ens, const EffectiveDrift* drift,
              const NoiseSpec& noise, double dt, bool parallel)
{
    if (!(dt > 0.0)) throw ConfigError("em_step: dt must be positive");
    noise.validate();

    const double s_chi = std::sqrt(noise.d_chi * dt);
    const double s_z = std::sqrt(noise.d_z * dt);
    const uint64_t counter = ens.step_count + 1;
    const uint64_t seed = ens.seed;
    const long n = static_cast<long>(ens.size());

#pragma omp parallel for if (parallel) schedule(static)
    for (long k = 0; k < n; ++k) {
        uint64_t state = rng::stream_key(seed, static_cast<uint64_t>(k), counter);
        const auto gs = rng::normal_pair(state);
        double uc = 0.0, uz = 0.0;
        if (drift) {
            const auto u = (*drift)(ens.chi[k], ens.z[k]);
            uc = u[0];
            uz = u[1];
        }
        const double chi = ens.chi[k] + uc * dt + s_chi * gs.a;
        const double z = ens.z[k] + uz * dt + s_z * gs.b;
        ens.chi[k] = reflect_into(chi, -ens.chi_max, ens.chi_max);
        ens.z[k] = reflect_into(z, -ens.z_max, ens.z_max);
    }
    ens.step_count = counter;
}

} // namespace

void em_step(ParticleEnsemble& ens, const EffectiveDrift& drift,
             const NoiseSpec& noise, double dt)
{
    em_apply(ens, &drift, noise, dt, true);
}

void em_step_reference(ParticleEnsemble& ens, const EffectiveDrift& drift,
                       const NoiseSpec& noise, double dt)
{
    em_apply(ens, &drift, noise, dt, false);
}

void em_step(ParticleEnsemble& ens, const NoiseSpec& noise, double dt)
{
    em_apply(ens, nullptr, noise, dt, true);
}

DensityField2D histogram_density(const ParticleEnsemble& ens, const Grid2D& grid)
{
    if (grid.chi_max != ens.chi_max || grid.z_max != ens.z_max)
        throw ConfigError("histogram: grid rectangle does not match the ensemble domain");
    if (ens.size() == 0)
        throw ConfigError("histogram: empty ensemble");

    // Integer counts so the reduction is exact in any merge order.
    std::vector<long> counts(grid.cells(), 0);
    for (size_t k = 0; k < ens.size(); ++k) {
        int i = static_cast<int>((ens.chi[k] + grid.chi_max) / grid.dchi());
        int j = static_cast<int>((ens.z[k] + grid.z_max) / grid.dz());
        i = std::clamp(i, 0, grid.nchi - 1);
        j = std::clamp(j, 0, grid.nz - 1);
        ++counts[grid.index(i, j)];
    }

    DensityField2D out(grid);
    const double w = 1.0 / (static_cast<double>(ens.size()) * grid.cell_area());
    for (int k = 0; k < grid.cells(); ++k) out.values[k] = counts[k] * w;
    return out;
}

double l1_distance(const DensityField2D& a, const DensityField2D& b)
{
    if (!a.grid.same_as(b.grid))
        throw ConfigError("l1_distance: grids differ");
    double s = 0.0;
    for (size_t k = 0; k < a.values.size(); ++k) s += std::abs(a.values[k] - b.values[k]);
    return s * a.grid.cell_area();
}

std::vector<double> compare_to_fp(const std::vector<DensityField2D>& histograms,
                                  const std::vector<DensityField2D>& fp_snapshots)
{
    if (histograms.size() != fp_snapshots.size())
        throw ConfigError("compare_to_fp: need one snapshot per histogram");
    std::vector<double> l1;
    l1.reserve(histograms.size());
    for (size_t k = 0; k < histograms.size(); ++k)
        l1.push_back(l1_distance(histograms[k], aggregate(fp_snapshots[k], histograms[k].grid)));
    return l1;
}

} // namespace imdiff
