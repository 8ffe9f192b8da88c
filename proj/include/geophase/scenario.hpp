// scenario.hpp — named reproductions of the model's limiting-case claims

#pragma once

#include "geophase/sweep.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace geophase {

struct ScenarioOptions {
    ModelParams base;                 // generic point the scenarios perturb
    double theta{std::numbers::pi / 2};
    double proxy_factor{1e6};         // "infinite" coupling = factor * largest other scale
    double limit_tolerance{1e-3};
    int loop_steps{4096};
    int fine_steps{65536};            // loops checked at 1e-8
};

struct Check {
    std::string what;
    int level{0};
    double measured{0.0};
    double expected{0.0};
    double tolerance{0.0};
    bool modulo_2pi{true};
    bool lower_bound{false};  // passes when |wrap(measured)| >= tolerance
    bool passed{false};
};

struct ScenarioResult {
    std::string name;
    std::string description;
    std::vector<ResultRow> rows;
    std::vector<Check> checks;

    bool passed() const;
};

const std::vector<std::string>& scenario_names();

// Throws Error(InvalidInput) for an unknown name.
ScenarioResult run_scenario(const std::string& name, const ScenarioOptions& options = {});

void write_report(std::ostream& os, const ScenarioResult& result);

// Writes <dir>/<name>.csv and <dir>/<name>.txt.
void save_scenario(const std::filesystem::path& dir, const ScenarioResult& result);

} // namespace geophase
