#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace imdiff {

enum class Experiment { rigid_body, fp_vs_sde, magnetosphere };

Experiment parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

/// Flat key=value experiment configuration.  Every key has a default; unknown
/// keys are rejected during construction.
struct ExperimentConfig {
    Experiment experiment = Experiment::rigid_body;
    std::string out_dir = "out";
    uint64_t seed = 12345;

    // Chart and solver (rigid-body and fp-vs-sde).
    int nchi = 128, nz = 128;
    double chi_max = 1.0, z_max = 1.5, casimir = 2.0;
    double inertia_x = 1.0, inertia_y = 2.0, inertia_z = 3.0;
    double d_chi = 0.1, d_z = 0.1;
    double t_end = 20.0;
    double snapshot_dt = 0.1;

    // Particle oracle (fp-vs-sde).
    long particles = 100000;
    int hist_nchi = 16, hist_nz = 16;
    double sde_dt = 2e-3;
    std::vector<double> compare_times = {2.0, 5.0, 10.0};

    // Magnetosphere.
    double dipole_m = 1.0;
    double psi_min = 0.2, psi_max = 1.0;
    int npsi = 128, nmu = 32, nv = 32;
    double mu_max = 10.0, v_max = 5.0;
    double particle_mass = 1.0, temperature = 1.0, d_psi = 0.05;
    int map_nr = 64, map_nz = 64;
    double map_r_min = 1.0, map_r_max = 5.0, map_z_max = 2.0;
};

/// Parses `key = value` lines; '#' starts a comment.  Duplicate keys are an
/// error.
std::map<std::string, std::string> parse_config_text(const std::string& text);

std::map<std::string, std::string> read_config_file(const std::string& path);

/// Builds a validated config from defaults, file entries and CLI overrides
/// (applied in that order).  Unknown keys and malformed values throw
/// ConfigError.
ExperimentConfig build_config(Experiment experiment,
                              const std::map<std::string, std::string>& file_entries,
                              const std::vector<std::pair<std::string, std::string>>& overrides);

} // namespace imdiff
