#include "imdiff/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "imdiff/csv.hpp"
#include "imdiff/errors.hpp"
#include "imdiff/fp_solver.hpp"
#include "imdiff/magnetosphere.hpp"
#include "imdiff/sde.hpp"
#include "imdiff/svg.hpp"

namespace imdiff {

namespace {

namespace fs = std::filesystem;

CanonicalChart chart_from(const ExperimentConfig& cfg)
{
    return make_rigid_body_chart({cfg.inertia_x, cfg.inertia_y, cfg.inertia_z},
                                 cfg.casimir, cfg.chi_max, cfg.z_max);
}

/// Flat distribution f on the Cartesian measure: P = f * exp(z^2/2).
DensityField2D flat_f_density(const Grid2D& grid)
{
    return density_from_function(grid, [](double, double z) { return std::exp(0.5 * z * z); });
}

void check_trace(RunReport& report, const EntropyTrace& trace, long steps_per_row)
{
    double mass_drift = 0.0;
    double min_sigma_step = 0.0;
    bool production_nonneg = true;
    for (size_t k = 0; k < trace.rows.size(); ++k) {
        mass_drift = std::max(mass_drift, std::abs(trace.rows[k].mass - 1.0));
        if (trace.rows[k].entropy_production_fisher < 0.0) production_nonneg = false;
        if (k > 0)
            min_sigma_step = std::min(
                min_sigma_step, trace.rows[k].sigma_entropy - trace.rows[k - 1].sigma_entropy);
    }
    report.add("mass drift <= 1e-12", mass_drift <= 1e-12);
    report.add("entropy production >= 0 at every snapshot", production_nonneg);
    report.add("Sigma non-decreasing", min_sigma_step >= -1e-9 * steps_per_row);
    report.add("S-tilde decreased over the run",
               trace.rows.back().tilde_entropy < trace.rows.front().tilde_entropy);
}

void plot_trace(const EntropyTrace& trace, const std::string& out_dir)
{
    std::vector<double> t, sigma, tilde, prod_d, prod_f;
    for (const auto& r : trace.rows) {
        t.push_back(r.t);
        sigma.push_back(r.sigma_entropy);
        tilde.push_back(r.tilde_entropy);
        prod_d.push_back(r.entropy_production_direct);
        prod_f.push_back(r.entropy_production_fisher);
    }
    emit_plot({{"Sigma", "#1f77b4", t, sigma}, {"S-tilde", "#d62728", t, tilde}},
              "Entropy vs time", "t", out_dir + "/entropy.svg");
    emit_plot({{"sigma (direct)", "#2ca02c", t, prod_d},
               {"sigma (Fisher)", "#9467bd", t, prod_f}},
              "Entropy production vs time", "t", out_dir + "/sigma.svg");
}

RunReport run_rigid_body(const ExperimentConfig& cfg)
{
    const CanonicalChart chart = chart_from(cfg);
    const Grid2D grid(cfg.nchi, cfg.nz, cfg.chi_max, cfg.z_max);
    const NoiseSpec noise{cfg.d_chi, cfg.d_z};
    const DensityField2D p0 = flat_f_density(grid);

    FPSolver probe(chart, grid, noise);
    SolverConfig scfg;
    scfg.t_end = cfg.t_end;
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end / probe.dt_bound())));
    const double dt = cfg.t_end / steps;
    scfg.dt = dt;
    scfg.snapshot_stride =
        std::max(1, static_cast<int>(std::lround(cfg.snapshot_dt / dt)));

    const FPResult result = fp_solve(p0, chart, noise, scfg);

    emit_trace(result.trace, cfg.out_dir + "/entropy_trace.csv");
    emit_field(result.snapshots.front().p, cfg.out_dir + "/p_initial.csv");
    emit_field(result.snapshots.back().p, cfg.out_dir + "/p_final.csv");
    plot_trace(result.trace, cfg.out_dir);
    emit_plot(result.snapshots.back().p.values, grid.nchi, grid.nz,
              -grid.chi_max, grid.chi_max, -grid.z_max, grid.z_max, "P at t_end", {},
              cfg.out_dir + "/p_final.svg");

    RunReport report;
    check_trace(report, result.trace, scfg.snapshot_stride);
    const DensityField2D& pf = result.snapshots.back().p;
    const double pbar = 1.0 / grid.area();
    double dev = 0.0;
    for (double v : pf.values) dev = std::max(dev, std::abs(v - pbar) / pbar);
    report.add("final relative flatness < 1%", dev < 0.01);
    return report;
}

RunReport run_fp_vs_sde(const ExperimentConfig& cfg)
{
    const CanonicalChart chart = chart_from(cfg);
    const Grid2D fp_grid(cfg.nchi, cfg.nz, cfg.chi_max, cfg.z_max);
    const Grid2D hist_grid(cfg.hist_nchi, cfg.hist_nz, cfg.chi_max, cfg.z_max);
    const NoiseSpec noise{cfg.d_chi, cfg.d_z};

    const DensityField2D p0 = flat_f_density(fp_grid);
    FPSolver solver(chart, fp_grid, noise);
    const EffectiveDrift drift = make_effective_drift(chart);

    ParticleEnsemble ens = sample_ensemble(p0, static_cast<size_t>(cfg.particles), cfg.seed);
    DensityField2D p = p0;

    std::vector<double> times = cfg.compare_times;
    std::sort(times.begin(), times.end());

    const JacobianField jac = chart_jacobian_field(fp_grid);
    const WallFlux no_flux = WallFlux::zeros(fp_grid);
    EntropyTrace trace;
    const auto record = [&](double t) {
        trace.rows.push_back({t, sigma_entropy(p), tilde_entropy(p, jac),
                              entropy_production_direct(p, noise).value,
                              entropy_production_fisher(p, noise), entropy_flow(p, no_flux),
                              p.mass()});
    };
    record(0.0);

    std::string l1_csv = "t,l1\n";
    std::vector<double> l1s;
    double t_prev = 0.0;
    for (double t_target : times) {
        const double span = t_target - t_prev;
        if (span > 0.0) {
            const long nfp = std::max<long>(1, static_cast<long>(std::ceil(span / solver.dt_bound())));
            const double dt_fp = span / nfp;
            for (long n = 0; n < nfp; ++n) solver.step(p, dt_fp);

            const long nem = std::max<long>(1, static_cast<long>(std::ceil(span / cfg.sde_dt - 1e-12)));
            const double dt_em = span / nem;
            for (long n = 0; n < nem; ++n) em_step(ens, drift, noise, dt_em);
        }
        const DensityField2D hist = histogram_density(ens, hist_grid);
        const double l1 = l1_distance(hist, aggregate(p, hist_grid));
        l1s.push_back(l1);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t_target, l1);
        l1_csv += buf;
        record(t_target);
        t_prev = t_target;
    }

    emit_trace(trace, cfg.out_dir + "/entropy_trace.csv");
    write_text_file(cfg.out_dir + "/l1_report.csv", l1_csv);
    const DensityField2D hist_final = histogram_density(ens, hist_grid);
    emit_field(hist_final, cfg.out_dir + "/histogram_final.csv");
    emit_field(p, cfg.out_dir + "/p_final.csv");

    // z-marginals of the solver density and the histogram at t_end.
    const DensityField2D p_coarse = aggregate(p, hist_grid);
    std::vector<double> zc, mp, mh;
    for (int j = 0; j < hist_grid.nz; ++j) {
        double sp = 0.0, sh = 0.0;
        for (int i = 0; i < hist_grid.nchi; ++i) {
            sp += p_coarse.at(i, j) * hist_grid.dchi();
            sh += hist_final.at(i, j) * hist_grid.dchi();
        }
        zc.push_back(hist_grid.z_center(j));
        mp.push_back(sp);
        mh.push_back(sh);
    }
    emit_plot({{"solver", "#1f77b4", zc, mp}, {"particles", "#d62728", zc, mh}},
              "z-marginal at t_end", "z", cfg.out_dir + "/marginals.svg");

    RunReport report;
    double l1_max = 0.0;
    for (double v : l1s) l1_max = std::max(l1_max, v);
    report.add("L1(histogram, P) < 0.05 at every compare time", l1_max < 0.05);
    report.add("solver mass drift <= 1e-12", std::abs(p.mass() - 1.0) <= 1e-12);
    report.add("histogram mass = 1", std::abs(hist_final.mass() - 1.0) <= 1e-12);
    return report;
}

RunReport run_magnetosphere(const ExperimentConfig& cfg)
{
    DipoleGeometry geom;
    geom.moment = cfg.dipole_m;
    geom.r_min = cfg.map_r_min;
    geom.r_max = cfg.map_r_max;
    geom.z_min = -cfg.map_z_max;
    geom.z_max = cfg.map_z_max;
    geom.nr = cfg.map_nr;
    geom.nz = cfg.map_nz;

    MagnetoState shape;
    shape.psi_min = cfg.psi_min;
    shape.psi_max = cfg.psi_max;
    shape.npsi = cfg.npsi;
    shape.nmu = cfg.nmu;
    shape.nv = cfg.nv;
    shape.mu_max = cfg.mu_max;
    shape.v_max = cfg.v_max;
    shape.particle_mass = cfg.particle_mass;
    shape.d_psi = cfg.d_psi;

    const MagnetoState initial = maxwell_boltzmann_state(geom, shape, cfg.temperature);
    const auto mu0 = mu_marginal(initial);
    const auto v0 = v_marginal(initial);

    const double dt = magneto_stable_dt(initial);
    const int stride = std::max(1, static_cast<int>(std::lround(cfg.snapshot_dt / dt)));
    MagnetoRunResult result = magneto_solve(initial, geom, cfg.t_end, stride);

    emit_trace(result.trace, cfg.out_dir + "/entropy_trace.csv");
    plot_trace(result.trace, cfg.out_dir);

    const MomentMaps maps = moments(result.final_state, geom);
    std::vector<double> anisotropy(maps.density.size(), std::nan(""));
    for (size_t k = 0; k < anisotropy.size(); ++k)
        if (maps.valid[k] && maps.t_par[k] > 0.0) anisotropy[k] = maps.t_perp[k] / maps.t_par[k];

    const auto emit_map = [&](const std::vector<double>& v, const std::string& name) {
        emit_matrix(v, geom.nr, geom.nz, geom.r_min, geom.r_max, geom.z_min, geom.z_max,
                    cfg.out_dir + "/" + name + ".csv");
    };
    emit_map(maps.density, "n_map");
    emit_map(maps.t_perp, "t_perp_map");
    emit_map(maps.t_par, "t_par_map");
    emit_map(anisotropy, "anisotropy_map");

    // Contour overlays of B and psi on the same sample grid.
    std::vector<double> bgrid(maps.density.size()), psigrid(maps.density.size());
    for (int j = 0; j < geom.nz; ++j)
        for (int i = 0; i < geom.nr; ++i) {
            bgrid[maps.index(i, j)] = field_strength(geom, geom.r_center(i), geom.z_center(j));
            psigrid[maps.index(i, j)] = flux_function(geom, geom.r_center(i), geom.z_center(j));
        }
    const std::vector<double> psi_levels = {0.25, 0.4, 0.55, 0.7, 0.85};
    const std::vector<double> b_levels = {0.02, 0.05, 0.1, 0.25, 0.5};
    const std::vector<ContourOverlay> overlays = {
        {bgrid, b_levels, "#ffffff"}, {psigrid, psi_levels, "#00c000"}};
    emit_plot(maps.density, geom.nr, geom.nz, geom.r_min, geom.r_max, geom.z_min,
              geom.z_max, "density (B and psi contours)", overlays,
              cfg.out_dir + "/n_map.svg");
    emit_plot(anisotropy, geom.nr, geom.nz, geom.r_min, geom.r_max, geom.z_min,
              geom.z_max, "T_perp / T_par", overlays, cfg.out_dir + "/anisotropy_map.svg");

    RunReport report;
    check_trace(report, result.trace, stride);

    const auto mu1 = mu_marginal(result.final_state);
    const auto v1 = v_marginal(result.final_state);
    double mu_drift = 0.0, v_drift = 0.0;
    for (size_t k = 0; k < mu0.size(); ++k) mu_drift = std::max(mu_drift, std::abs(mu1[k] - mu0[k]));
    for (size_t k = 0; k < v0.size(); ++k) v_drift = std::max(v_drift, std::abs(v1[k] - v0[k]));
    report.add("mu marginal conserved to 1e-14", mu_drift <= 1e-14);
    report.add("v_par marginal conserved to 1e-14", v_drift <= 1e-14);

    // Up-hill structure at the (near-)equatorial row: n and T_perp/T_par
    // ratios between two radii must match the field-strength ratio.
    const int j_eq = geom.nz / 2;
    const auto nearest_i = [&](double r) {
        return std::clamp(static_cast<int>((r - geom.r_min) / ((geom.r_max - geom.r_min) / geom.nr)),
                          0, geom.nr - 1);
    };
    const int i1 = nearest_i(1.25), i2 = nearest_i(2.5);
    const double b1 = bgrid[maps.index(i1, j_eq)], b2 = bgrid[maps.index(i2, j_eq)];
    const double n1 = maps.density[maps.index(i1, j_eq)], n2 = maps.density[maps.index(i2, j_eq)];
    const double a1 = anisotropy[maps.index(i1, j_eq)], a2 = anisotropy[maps.index(i2, j_eq)];
    const bool ratios_ok = maps.valid[maps.index(i1, j_eq)] && maps.valid[maps.index(i2, j_eq)] &&
                           std::abs(n1 / n2 / (b1 / b2) - 1.0) < 0.01 &&
                           std::abs(a1 / a2 / (b1 / b2) - 1.0) < 0.01;
    report.add("steady-state n and anisotropy ratios match B ratio within 1%", ratios_ok);
    return report;
}

} // namespace

RunReport run_experiment(const ExperimentConfig& cfg)
{
    fs::create_directories(cfg.out_dir);
    switch (cfg.experiment) {
        case Experiment::rigid_body: return run_rigid_body(cfg);
        case Experiment::fp_vs_sde: return run_fp_vs_sde(cfg);
        case Experiment::magnetosphere: return run_magnetosphere(cfg);
    }
    throw ConfigError("unknown experiment");
}

} // namespace imdiff
