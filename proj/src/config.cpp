#include "imdiff/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "imdiff/errors.hpp"

namespace imdiff {

Experiment parse_experiment(const std::string& name)
{
    if (name == "rigid-body") return Experiment::rigid_body;
    if (name == "fp-vs-sde") return Experiment::fp_vs_sde;
    if (name == "magnetosphere") return Experiment::magnetosphere;
    throw ConfigError("unknown experiment '" + name +
                      "' (expected rigid-body, fp-vs-sde or magnetosphere)");
}

std::string experiment_name(Experiment e)
{
    switch (e) {
        case Experiment::rigid_body: return "rigid-body";
        case Experiment::fp_vs_sde: return "fp-vs-sde";
        case Experiment::magnetosphere: return "magnetosphere";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has malformed number '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v)
{
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has malformed integer '" + v + "'");
    }
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError("config: key '" + key + "' needs at least one value");
    return out;
}

} // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key or value");
        if (!out.emplace(key, value).second)
            throw ConfigError("config: duplicate key '" + key + "'");
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ExperimentConfig build_config(Experiment experiment,
                              const std::map<std::string, std::string>& file_entries,
                              const std::vector<std::pair<std::string, std::string>>& overrides)
{
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    if (experiment == Experiment::fp_vs_sde) {
        // Finer solver grid than the histogram, shorter run.
        cfg.nchi = 64;
        cfg.nz = 64;
        cfg.t_end = 10.0;
    }

    static const std::set<std::string> common = {"out", "seed"};
    static const std::set<std::string> chart_keys = {
        "nchi", "nz", "chi_max", "z_max", "casimir",
        "inertia_x", "inertia_y", "inertia_z",
        "d_chi", "d_z", "t_end", "snapshot_dt"};
    static const std::set<std::string> sde_keys = {
        "particles", "hist_nchi", "hist_nz", "sde_dt", "compare_times"};
    static const std::set<std::string> magneto_keys = {
        "dipole_m", "psi_min", "psi_max", "npsi", "nmu", "nv", "mu_max", "v_max",
        "particle_mass", "temperature", "d_psi", "t_end", "snapshot_dt",
        "map_nr", "map_nz", "map_r_min", "map_r_max", "map_z_max"};

    std::set<std::string> allowed = common;
    switch (experiment) {
        case Experiment::rigid_body:
            allowed.insert(chart_keys.begin(), chart_keys.end());
            break;
        case Experiment::fp_vs_sde:
            allowed.insert(chart_keys.begin(), chart_keys.end());
            allowed.insert(sde_keys.begin(), sde_keys.end());
            break;
        case Experiment::magnetosphere:
            allowed.insert(magneto_keys.begin(), magneto_keys.end());
            break;
    }
    if (experiment == Experiment::magnetosphere) cfg.t_end = 25.0;

    std::map<std::string, std::string> merged = file_entries;
    for (const auto& [k, v] : overrides) merged[k] = v; // CLI wins

    for (const auto& [key, value] : merged) {
        if (!allowed.count(key))
            throw ConfigError("config: unknown key '" + key + "' for experiment " +
                              experiment_name(experiment));
        if (key == "out") cfg.out_dir = value;
        else if (key == "seed") cfg.seed = static_cast<uint64_t>(to_long(key, value));
        else if (key == "nchi") cfg.nchi = static_cast<int>(to_long(key, value));
        else if (key == "nz") cfg.nz = static_cast<int>(to_long(key, value));
        else if (key == "chi_max") cfg.chi_max = to_double(key, value);
        else if (key == "z_max") cfg.z_max = to_double(key, value);
        else if (key == "casimir") cfg.casimir = to_double(key, value);
        else if (key == "inertia_x") cfg.inertia_x = to_double(key, value);
        else if (key == "inertia_y") cfg.inertia_y = to_double(key, value);
        else if (key == "inertia_z") cfg.inertia_z = to_double(key, value);
        else if (key == "d_chi") cfg.d_chi = to_double(key, value);
        else if (key == "d_z") cfg.d_z = to_double(key, value);
        else if (key == "t_end") cfg.t_end = to_double(key, value);
        else if (key == "snapshot_dt") cfg.snapshot_dt = to_double(key, value);
        else if (key == "particles") cfg.particles = to_long(key, value);
        else if (key == "hist_nchi") cfg.hist_nchi = static_cast<int>(to_long(key, value));
        else if (key == "hist_nz") cfg.hist_nz = static_cast<int>(to_long(key, value));
        else if (key == "sde_dt") cfg.sde_dt = to_double(key, value);
        else if (key == "compare_times") cfg.compare_times = to_list(key, value);
        else if (key == "dipole_m") cfg.dipole_m = to_double(key, value);
        else if (key == "psi_min") cfg.psi_min = to_double(key, value);
        else if (key == "psi_max") cfg.psi_max = to_double(key, value);
        else if (key == "npsi") cfg.npsi = static_cast<int>(to_long(key, value));
        else if (key == "nmu") cfg.nmu = static_cast<int>(to_long(key, value));
        else if (key == "nv") cfg.nv = static_cast<int>(to_long(key, value));
        else if (key == "mu_max") cfg.mu_max = to_double(key, value);
        else if (key == "v_max") cfg.v_max = to_double(key, value);
        else if (key == "particle_mass") cfg.particle_mass = to_double(key, value);
        else if (key == "temperature") cfg.temperature = to_double(key, value);
        else if (key == "d_psi") cfg.d_psi = to_double(key, value);
        else if (key == "map_nr") cfg.map_nr = static_cast<int>(to_long(key, value));
        else if (key == "map_nz") cfg.map_nz = static_cast<int>(to_long(key, value));
        else if (key == "map_r_min") cfg.map_r_min = to_double(key, value);
        else if (key == "map_r_max") cfg.map_r_max = to_double(key, value);
        else if (key == "map_z_max") cfg.map_z_max = to_double(key, value);
    }

    // Range checks; geometric constraints are re-validated by the modules.
    if (cfg.nchi < 8 || cfg.nz < 8) throw ConfigError("config: grid needs at least 8 cells per axis");
    if (cfg.t_end <= 0.0) throw ConfigError("config: t_end must be positive");
    if (cfg.snapshot_dt <= 0.0) throw ConfigError("config: snapshot_dt must be positive");
    if (cfg.d_chi < 0.0 || cfg.d_z < 0.0) throw ConfigError("config: diffusion must be nonnegative");
    if (experiment == Experiment::fp_vs_sde) {
        if (cfg.particles < 1000) throw ConfigError("config: need at least 1000 particles");
        if (cfg.sde_dt <= 0.0) throw ConfigError("config: sde_dt must be positive");
        if (cfg.hist_nchi < 8 || cfg.hist_nz < 8)
            throw ConfigError("config: histogram needs at least 8 cells per axis");
        if (cfg.nchi % cfg.hist_nchi != 0 || cfg.nz % cfg.hist_nz != 0)
            throw ConfigError("config: solver grid must be an integer refinement of the histogram");
        for (double t : cfg.compare_times)
            if (t < 0.0 || t > cfg.t_end)
                throw ConfigError("config: compare_times must lie in [0, t_end]");
    }
    if (cfg.psi_min <= 0.0 || cfg.psi_max <= cfg.psi_min)
        throw ConfigError("config: need 0 < psi_min < psi_max");
    if (cfg.temperature <= 0.0) throw ConfigError("config: temperature must be positive");
    if (cfg.d_psi <= 0.0) throw ConfigError("config: d_psi must be positive");
    if (cfg.map_r_min <= 0.0 || cfg.map_r_max <= cfg.map_r_min)
        throw ConfigError("config: need 0 < map_r_min < map_r_max");
    return cfg;
}

} // namespace imdiff
