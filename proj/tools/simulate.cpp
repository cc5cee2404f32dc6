#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imdiff/config.hpp"
#include "imdiff/errors.hpp"
#include "imdiff/experiments.hpp"

using namespace imdiff;

int main(int argc, char** argv)
{
    CLI::App app{"Diffusion of constrained Hamiltonian systems on their invariant measure"};
    app.footer("Experiments: rigid-body | fp-vs-sde | magnetosphere\n"
               "Thread count is controlled by OMP_NUM_THREADS.");

    std::string experiment_arg;
    std::string config_path;
    std::string out_dir;
    std::string seed_str;
    std::string particles_str;
    std::vector<std::string> override_args;

    app.add_option("experiment", experiment_arg, "Experiment to run")->required();
    app.add_option("--config", config_path, "Key = value config file");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed_str, "RNG seed");
    app.add_option("--particles", particles_str, "Particle count (fp-vs-sde)");
    app.add_option("--override", override_args, "key=value, repeatable; wins over the file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const Experiment experiment = parse_experiment(experiment_arg);

        std::map<std::string, std::string> file_entries;
        if (!config_path.empty()) file_entries = read_config_file(config_path);

        std::vector<std::pair<std::string, std::string>> overrides;
        for (const auto& o : override_args) {
            const auto eq = o.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == o.size())
                throw ConfigError("--override expects key=value, got '" + o + "'");
            overrides.emplace_back(o.substr(0, eq), o.substr(eq + 1));
        }
        if (!out_dir.empty()) overrides.emplace_back("out", out_dir);
        if (!seed_str.empty()) overrides.emplace_back("seed", seed_str);
        if (!particles_str.empty()) overrides.emplace_back("particles", particles_str);

        const ExperimentConfig cfg = build_config(experiment, file_entries, overrides);
        const RunReport report = run_experiment(cfg);

        int passed = 0;
        for (const auto& [label, ok] : report.checks) {
            std::printf("%s %s\n", ok ? "PASS" : "FAIL", label.c_str());
            if (ok) ++passed;
        }
        std::printf("%s %s: %d/%zu invariant checks, artifacts in %s\n",
                    report.all_ok() ? "PASS" : "FAIL", experiment_name(experiment).c_str(),
                    passed, report.checks.size(), cfg.out_dir.c_str());
        return report.all_ok() ? 0 : 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const SolverFault& e) {
        std::fprintf(stderr, "numerical fault: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
