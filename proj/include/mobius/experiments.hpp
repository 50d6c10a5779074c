#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mobius/lowdim.hpp"

namespace mobius::experiments {

using json = nlohmann::ordered_json;

/// Named experiment scenarios; each reproduces one verified property of the
/// kinetic-energy geometry and writes a JSON report (plus CSV data where the
/// result is a table).
extern const std::vector<std::pair<std::string, std::string>> kScenarios;

struct RunOptions {
    uint64_t seed_override = 0;  // 0 = take the config's seed
    bool has_seed_override = false;
    std::string out_dir_override;
    int workers = 0;
};

/// Executes the scenario named in the config.  Returns the report; writes
/// <out>/<scenario>.json and data CSVs.  Throws ConfigError on a bad config.
json run_scenario(const json& config, const RunOptions& opts);

/// Loads a config file and runs it.  Returns the process exit code:
/// 0 on pass, 1 on tolerance failure, 2 on usage errors.
int run_config_file(const std::string& path, const RunOptions& opts);

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// The acceptance suite: every criterion at its pinned tolerance.
/// Prints one PASS/FAIL line per criterion as it completes.
std::vector<CriterionResult> run_acceptance(int workers, const std::string& out_dir);

json acceptance_report(const std::vector<CriterionResult>& results);

}  // namespace mobius::experiments
