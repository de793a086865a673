#pragma once

#include "fsvar/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fsvar {

inline constexpr Index kDefaultDensityGrid = 1000;
/// Lower bound applied to kernel estimates so that logs downstream stay finite.
inline constexpr double kDensityFloor = 1e-12;

/// Rule-of-thumb bandwidth 0.9 * min(sd, IQR / 1.34) * N^(-1/5).
/// Falls back to the standard deviation when the IQR is zero.
/// Throws std::invalid_argument("zero dispersion") for constant samples.
double silverman_bandwidth(std::span<const double> sample);

/// Unnormalized reflected Gaussian kernel estimate at `points`:
///   (1 / Nh) * sum_i [k((x - xi)/h) + k((x - (2L - xi))/h) + k((x - (2U - xi))/h)].
/// Kernel terms beyond 10 bandwidths are skipped (each is below 1e-22 / h).
Eigen::VectorXd reflected_kde(std::span<const double> sample, const Support& support,
                              double bandwidth, const Eigen::VectorXd& points);

/// Reflected kernel density on a uniform `n_grid` grid over the support,
/// floored at kDensityFloor and rescaled to unit trapezoid integral.
/// The bandwidth defaults to silverman_bandwidth(sample).
DensityCurve estimate_density(std::span<const double> sample, const Support& support,
                              Index n_grid = kDefaultDensityGrid,
                              std::optional<double> bandwidth = std::nullopt);

/// estimate_density for every period of a panel; periods run in parallel,
/// output order follows panel.periods.
std::vector<DensityCurve> estimate_panel(const MicroPanel& panel,
                                         Index n_grid = kDefaultDensityGrid,
                                         unsigned threads = 0);

}  // namespace fsvar
