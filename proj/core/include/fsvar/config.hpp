#pragma once

#include "fsvar/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fsvar {

/// Version string of the built library, e.g. "0.3.0".
std::string library_version();

/// Settings for every CLI command, read from a `key = value` text file.
/// Lines starting with '#' are comments. Unknown keys and out-of-range values
/// raise ConfigError naming the line.
struct RunConfig {
  // inputs and outputs
  std::string macro_csv;
  std::string micro_csv;
  std::string output_dir = "out";
  std::string fit_dir;  // where irf/flp read fitted artifacts; defaults to output_dir

  // density estimation
  Support support{0.0, 1.0};
  bool support_set = false;
  Index n_grid = 1000;
  Index min_obs = 10;

  // FPCA
  Index k = 0;  // 0 selects K by the scree rule
  double scree_threshold = 0.90;

  // VAR
  Index p = 4;
  double lambda1 = 0.2;
  double lambda2 = 2.0;
  std::vector<int> persistent;  // one 0/1 per VAR variable; empty = macro 1, scores 0
  Index n_draws = 1000;
  std::uint64_t seed = 1;

  // identification and responses
  std::string impulse;  // macro variable ordered last; empty = use `shock`
  Index shock = 0;      // 1-based position in z; 0 = last variable
  double shock_size = 1.0;
  std::vector<Index> horizons{0, 4, 12, 24};
  std::vector<double> bands{0.68};
  std::vector<double> quantiles{0.1, 0.25, 0.5, 0.75, 0.9};
  Index n_classes = 4;
  bool gini_percent = false;
  bool write_long = false;  // per-draw delta curves; large

  // local projections
  std::string method = "fsvar";  // fsvar | flp
  Index flp_p = 1;
  std::string hac = "driscoll-kraay";  // driscoll-kraay | newey-west
  Index hac_lags = -1;                 // -1 = floor(1.3 sqrt(T))
  Index flp_sims = 500;

  // simulation laboratory
  std::string dgp = "dgp1";  // dgp1 | dgp2
  std::uint64_t structure_seed = 20240611;
  Index t_len = 500;
  Index n_micro = 8000;
  Index burn_in = 500;
  Index reps = 20;
  std::vector<Index> k_list{1, 2, 3, 5, 7, 15};
  bool scree = false;
  Index mise_k_max = 5;
  double train_share = 0.8;

  unsigned threads = 0;

  /// Applies one `key = value` assignment. `where` is used in messages.
  void set(const std::string& key, const std::string& value, const std::string& where = "");
  /// Cross-field checks (support, ranges).
  void validate() const;
  /// Every effective setting as sorted `key = value` lines; hashed into manifests.
  [[nodiscard]] std::string canonical() const;
  [[nodiscard]] std::string hash() const;

  static RunConfig parse(const std::string& text, const std::string& source = "config");
  static RunConfig load(const std::string& path);
  static std::vector<std::string> known_keys();
};

}  // namespace fsvar
