#pragma once

#include "fsvar/config.hpp"

#include <string>
#include <vector>

namespace fsvar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

// Each command reads inputs named in the config and writes its tables plus a
// manifest.json into cfg.output_dir.
void cmd_simulate(const RunConfig& cfg);
void cmd_fit(const RunConfig& cfg);
void cmd_irf(const RunConfig& cfg);
void cmd_flp(const RunConfig& cfg);
void cmd_mc(const RunConfig& cfg);
void cmd_mise_cv(const RunConfig& cfg);
// With a density file, prints its Gini coefficient. Otherwise computes one per
// period of the micro panel and writes gini_series.csv.
void cmd_gini(const RunConfig& cfg, const std::string& density_csv);

// Config file (optional) followed by key=value overrides, validated.
RunConfig build_config(const std::string& path, const std::vector<std::string>& overrides);

// Parses argv, dispatches and maps exceptions to exit codes.
int run(int argc, char** argv);

}  // namespace fsvar::cli
