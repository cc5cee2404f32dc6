#include "imdiff/magnetosphere.hpp"

#include <algorithm>
#include <cmath>

#include "imdiff/errors.hpp"

namespace imdiff {

double flux_function(const DipoleGeometry& geom, double r, double z)
{
    if (r <= 0.0) throw ConfigError("flux_function: r must be positive");
    const double d2 = r * r + z * z;
    return geom.moment * r * r / (d2 * std::sqrt(d2));
}

double field_strength(const DipoleGeometry& geom, double r, double z)
{
    if (r <= 0.0) throw ConfigError("field_strength: r must be positive");
    const double d2 = r * r + z * z;
    const double d5 = d2 * d2 * std::sqrt(d2);
    const double dpsi_dr = geom.moment * r * (2.0 * z * z - r * r) / d5;
    const double dpsi_dz = -3.0 * geom.moment * r * r * z / d5;
    return std::sqrt(dpsi_dr * dpsi_dr + dpsi_dz * dpsi_dz) / r;
}

double measure_jacobian(const DipoleGeometry& geom, double r, double z)
{
    return field_strength(geom, r, z);
}

double equatorial_b(const DipoleGeometry& geom, double psi)
{
    // On the equator psi = M/r, so B = M/r^3 = psi^3/M^2.
    return psi * psi * psi / (geom.moment * geom.moment);
}

double MagnetoState::mass() const
{
    double s = 0.0;
    for (double v : p) s += v;
    return s * cell_volume();
}

void MagnetoState::normalize()
{
    const double m = mass();
    if (!(m > 0.0) || !std::isfinite(m))
        throw ConfigError("magneto state: mass must be positive and finite");
    for (double& v : p) v /= m;
}

MagnetoState maxwell_boltzmann_state(const DipoleGeometry& geom, const MagnetoState& shape,
                                     double temperature)
{
    if (temperature <= 0.0) throw ConfigError("maxwell_boltzmann_state: temperature must be positive");
    if (shape.psi_min <= 0.0 || shape.psi_max <= shape.psi_min)
        throw ConfigError("maxwell_boltzmann_state: need 0 < psi_min < psi_max");
    if (shape.npsi < 8 || shape.nmu < 2 || shape.nv < 2)
        throw ConfigError("maxwell_boltzmann_state: grid too small");

    MagnetoState st = shape;
    st.p.assign(static_cast<size_t>(st.npsi) * st.nmu * st.nv, 0.0);
    for (int k = 0; k < st.nmu; ++k)
        for (int l = 0; l < st.nv; ++l)
            for (int i = 0; i < st.npsi; ++i) {
                const double beq = equatorial_b(geom, st.psi_center(i));
                const double energy = st.mu_center(k) * beq +
                                      0.5 * st.particle_mass * st.v_center(l) * st.v_center(l);
                st.p[st.index(i, k, l)] = std::exp(-energy / temperature) / beq;
            }
    st.normalize();
    return st;
}

double magneto_stable_dt(const MagnetoState& state)
{
    if (state.d_psi <= 0.0) throw ConfigError("magneto: d_psi must be positive");
    return 0.9 * state.dpsi() * state.dpsi() / (2.0 * state.d_psi);
}

namespace {

void diffuse_apply(MagnetoState& state, double dt, bool parallel)
{
    if (!(dt > 0.0) || dt > magneto_stable_dt(state) * (1.0 + 1e-12))
        throw ConfigError("diffuse: dt violates the stability bound");

    const int n = state.npsi;
    const double c = 0.5 * state.d_psi / (state.dpsi() * state.dpsi());
    const int slices = state.slices();

#pragma omp parallel for if (parallel) schedule(static)
    for (int s = 0; s < slices; ++s) {
        double* q = state.p.data() + static_cast<size_t>(s) * n;
        // No-flux 1D diffusion in flux form; each interior face value is
        // computed once and enters both neighbours, so mass telescopes.
        double flux_prev = 0.0;
        double left = q[0];
        for (int i = 0; i + 1 < n; ++i) {
            const double flux = c * (q[i + 1] - q[i]);
            q[i] = left + dt * (flux - flux_prev);
            left = q[i + 1];
            flux_prev = flux;
        }
        q[n - 1] = left + dt * (0.0 - flux_prev);
    }
}

} // namespace

void diffuse(MagnetoState& state, double dt)
{
    diffuse_apply(state, dt, true);
}

void diffuse_reference(MagnetoState& state, double dt)
{
    diffuse_apply(state, dt, false);
}

std::vector<double> mu_marginal(const MagnetoState& state)
{
    std::vector<double> out(state.nmu, 0.0);
    const double w = state.dpsi() * state.dv();
    for (int k = 0; k < state.nmu; ++k) {
        double s = 0.0;
        for (int l = 0; l < state.nv; ++l)
            for (int i = 0; i < state.npsi; ++i) s += state.p[state.index(i, k, l)];
        out[k] = s * w;
    }
    return out;
}

std::vector<double> v_marginal(const MagnetoState& state)
{
    std::vector<double> out(state.nv, 0.0);
    const double w = state.dpsi() * state.dmu();
    for (int l = 0; l < state.nv; ++l) {
        double s = 0.0;
        for (int k = 0; k < state.nmu; ++k)
            for (int i = 0; i < state.npsi; ++i) s += state.p[state.index(i, k, l)];
        out[l] = s * w;
    }
    return out;
}

namespace {

/// Linear interpolation of the (mu, v) reductions of P in psi.
struct PsiProfile {
    std::vector<double> column;  // integral of P over (mu, v) per psi cell
    std::vector<double> mu_mean; // <mu> per psi cell
    std::vector<double> v2_mean; // <v^2> per psi cell
};

PsiProfile reduce_state(const MagnetoState& st)
{
    PsiProfile prof;
    prof.column.assign(st.npsi, 0.0);
    prof.mu_mean.assign(st.npsi, 0.0);
    prof.v2_mean.assign(st.npsi, 0.0);
    for (int i = 0; i < st.npsi; ++i) {
        double s = 0.0, smu = 0.0, sv2 = 0.0;
        for (int k = 0; k < st.nmu; ++k)
            for (int l = 0; l < st.nv; ++l) {
                const double v = st.p[st.index(i, k, l)];
                s += v;
                smu += v * st.mu_center(k);
                sv2 += v * st.v_center(l) * st.v_center(l);
            }
        prof.column[i] = s * st.dmu() * st.dv();
        prof.mu_mean[i] = s > 0.0 ? smu / s : 0.0;
        prof.v2_mean[i] = s > 0.0 ? sv2 / s : 0.0;
    }
    return prof;
}

double interp_psi(const std::vector<double>& values, const MagnetoState& st, double psi)
{
    const double x = (psi - st.psi_min) / st.dpsi() - 0.5;
    const int i0 = std::clamp(static_cast<int>(std::floor(x)), 0, st.npsi - 2);
    const double w = std::clamp(x - i0, 0.0, 1.0);
    return (1.0 - w) * values[i0] + w * values[i0 + 1];
}

} // namespace

MomentMaps moments(const MagnetoState& state, const DipoleGeometry& geom)
{
    const PsiProfile prof = reduce_state(state);

    MomentMaps maps;
    maps.geom = geom;
    const int cells = geom.nr * geom.nz;
    maps.density.assign(cells, std::nan(""));
    maps.t_perp.assign(cells, std::nan(""));
    maps.t_par.assign(cells, std::nan(""));
    maps.valid.assign(cells, 0);

#pragma omp parallel for schedule(static)
    for (int j = 0; j < geom.nz; ++j)
        for (int i = 0; i < geom.nr; ++i) {
            const double r = geom.r_center(i);
            const double z = geom.z_center(j);
            const double psi = flux_function(geom, r, z);
            if (psi < state.psi_min || psi > state.psi_max) continue;
            const double b = field_strength(geom, r, z);
            const int idx = maps.index(i, j);
            maps.density[idx] = b * interp_psi(prof.column, state, psi);
            maps.t_perp[idx] = b * interp_psi(prof.mu_mean, state, psi);
            maps.t_par[idx] = state.particle_mass * interp_psi(prof.v2_mean, state, psi);
            maps.valid[idx] = 1;
        }
    return maps;
}

namespace {

double magneto_log_floor(const MagnetoState& st)
{
    double mean = 0.0;
    for (double v : st.p) mean += v;
    mean /= st.p.size();
    return 1e-12 * mean;
}

} // namespace

MagnetoEntropies magneto_entropies(const MagnetoState& state, const DipoleGeometry& geom)
{
    const double floor = magneto_log_floor(state);
    const double vol = state.cell_volume();
    double sigma = 0.0, ln_b_avg = 0.0;
    for (int i = 0; i < state.npsi; ++i) {
        const double ln_beq = std::log(equatorial_b(geom, state.psi_center(i)));
        for (int k = 0; k < state.nmu; ++k)
            for (int l = 0; l < state.nv; ++l) {
                const double v = state.p[state.index(i, k, l)];
                sigma -= v * std::log(std::max(v, floor)) * vol;
                ln_b_avg += v * ln_beq * vol;
            }
    }
    return {sigma, sigma - ln_b_avg};
}

double magneto_production_direct(const MagnetoState& state)
{
    const double floor = magneto_log_floor(state);
    const double vol = state.cell_volume();
    const double inv_h2 = 1.0 / (state.dpsi() * state.dpsi());
    const int n = state.npsi;

    double out = 0.0;
    for (int s = 0; s < state.slices(); ++s) {
        const double* q = state.p.data() + static_cast<size_t>(s) * n;
        for (int i = 0; i < n; ++i) {
            const double pv = q[i];
            if (pv < floor) continue;
            const double lm = std::log(std::max(q[std::max(i - 1, 0)], floor));
            const double lc = std::log(std::max(pv, floor));
            const double lp = std::log(std::max(q[std::min(i + 1, n - 1)], floor));
            out -= pv * vol * 0.5 * state.d_psi * (lp - 2.0 * lc + lm) * inv_h2;
        }
    }
    return out;
}

double magneto_production_fisher(const MagnetoState& state)
{
    const double floor = magneto_log_floor(state);
    const double c = 0.5 * state.d_psi * state.cell_volume() /
                     (state.dpsi() * state.dpsi());
    const int n = state.npsi;

    double out = 0.0;
    for (int s = 0; s < state.slices(); ++s) {
        const double* q = state.p.data() + static_cast<size_t>(s) * n;
        for (int i = 0; i + 1 < n; ++i) {
            const double dp = q[i + 1] - q[i];
            const double dl = std::log(std::max(q[i + 1], floor)) - std::log(std::max(q[i], floor));
            out += c * dp * dl;
        }
    }
    return out;
}

MagnetoRunResult magneto_solve(const MagnetoState& initial, const DipoleGeometry& geom,
                               double t_end, int snapshot_stride)
{
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw ConfigError("magneto_solve: t_end must be positive and finite");

    MagnetoRunResult out;
    out.final_state = initial;
    MagnetoState& st = out.final_state;

    double dt = magneto_stable_dt(st);
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(t_end / dt - 1e-12)));
    dt = t_end / steps;
    long stride = snapshot_stride > 0 ? snapshot_stride : std::max<long>(1, steps / 200);

    const auto record = [&](double t) {
        const auto ent = magneto_entropies(st, geom);
        EntropyTrace::Row row;
        row.t = t;
        row.sigma_entropy = ent.sigma;
        row.tilde_entropy = ent.tilde;
        row.entropy_production_direct = magneto_production_direct(st);
        row.entropy_production_fisher = magneto_production_fisher(st);
        row.entropy_flow = 0.0; // no-flux ends
        row.mass = st.mass();
        out.trace.rows.push_back(row);
    };

    record(0.0);
    for (long nstep = 1; nstep <= steps; ++nstep) {
        diffuse(st, dt);
        if (nstep % stride == 0 || nstep == steps) record(nstep * dt);
    }
    return out;
}

} // namespace imdiff
