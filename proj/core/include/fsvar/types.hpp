#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fsvar {

using Index = Eigen::Index;

/// Closed interval [lower, upper] on which densities live.
struct Support {
  double lower = 0.0;
  double upper = 1.0;

  [[nodiscard]] double width() const { return upper - lower; }
  [[nodiscard]] bool contains(double x) const { return x >= lower && x <= upper; }
  [[nodiscard]] bool valid() const { return lower < upper; }
};

/// A probability density sampled on a strictly increasing grid over its support.
struct DensityCurve {
  Support support;
  Eigen::VectorXd grid;
  Eigen::VectorXd values;

  [[nodiscard]] Index size() const { return grid.size(); }
};

/// Log quantile density on a grid over [0, 1]. `support_sup` is the upper
/// end of the support the curve was computed from.
struct LqdCurve {
  Eigen::VectorXd grid01;
  Eigen::VectorXd values;
  double support_sup = 1.0;

  [[nodiscard]] Index size() const { return grid01.size(); }
};

/// Cross-sectional draws per period. Period order is the time order.
struct MicroPanel {
  std::vector<std::string> periods;
  std::vector<std::vector<double>> samples;
  Support support;

  [[nodiscard]] std::size_t num_periods() const { return periods.size(); }

  /// Throws DataError if a period has fewer than `min_obs` observations or
  /// any observation lies outside the support.
  void validate(std::size_t min_obs = 10) const;
};

}  // namespace fsvar
