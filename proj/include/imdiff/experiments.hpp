#pragma once

#include <string>
#include <utility>
#include <vector>

#include "imdiff/config.hpp"

namespace imdiff {

struct RunReport {
    std::vector<std::pair<std::string, bool>> checks;

    void add(const std::string& label, bool ok) { checks.emplace_back(label, ok); }
    bool all_ok() const
    {
        for (const auto& c : checks)
            if (!c.second) return false;
        return true;
    }
};

/// Runs one experiment: writes the CSV/SVG artifacts into cfg.out_dir and
/// returns the built-in invariant checks for the exit status.
RunReport run_experiment(const ExperimentConfig& cfg);

} // namespace imdiff
