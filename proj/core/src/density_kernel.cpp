#include "fsvar/density_kernel.hpp"

#include "fsvar/errors.hpp"
#include "fsvar/numeric.hpp"
#include "fsvar/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsvar {

namespace {
constexpr double kCutoff = 10.0;

// Sum of exp(-0.5 u^2), u = (x - r) / h, over points r within the cutoff of x.
// With `mirror` the points are r = mirror_axis - s for sorted samples s, so the
// window is searched around mirror_axis - x instead of x.
double window_sum(const std::vector<double>& sorted, double x, double h, bool mirror,
                  double mirror_axis) {
  const double c = kCutoff * h;
  const double center = mirror ? mirror_axis - x : x;
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), center - c);
  const auto hi = std::upper_bound(lo, sorted.end(), center + c);
  const double inv_h = 1.0 / h;
  double s = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double u = (center - *it) * inv_h;
    s += std::exp(-0.5 * u * u);
  }
  return s;
}
}  // namespace

void MicroPanel::validate(std::size_t min_obs) const {
  if (!support.valid()) throw DataError("micro panel: support needs L < U");
  if (samples.size() != periods.size())
    throw DataError("micro panel: period labels and samples differ in length");
  for (std::size_t t = 0; t < periods.size(); ++t) {
    if (samples[t].size() < min_obs)
      throw DataError("period " + periods[t] + ": " + std::to_string(samples[t].size()) +
                      " observations, need at least " + std::to_string(min_obs));
    for (double v : samples[t])
      if (!support.contains(v))
        throw DataError("period " + periods[t] + ": observation " + std::to_string(v) +
                        " outside the support");
  }
}

double silverman_bandwidth(std::span<const double> sample) {
  if (sample.size() < 2) throw std::invalid_argument("zero dispersion");
  const auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
  if (*mn == *mx) throw std::invalid_argument("zero dispersion");

  std::vector<double> work(sample.begin(), sample.end());
  const double q1 = sample_quantile(work, 0.25);
  const double q3 = sample_quantile(work, 0.75);
  const double sd = sample_sd(sample);
  const double iqr = q3 - q1;
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(sample.size()), -0.2);
}

Eigen::VectorXd reflected_kde(std::span<const double> sample, const Support& support,
                              double bandwidth, const Eigen::VectorXd& points) {
  if (sample.empty()) throw std::invalid_argument("reflected_kde: empty sample");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("reflected_kde: bandwidth must be positive");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());

  const double norm = 1.0 / (static_cast<double>(sorted.size()) * bandwidth *
                             std::sqrt(2.0 * std::numbers::pi));
  Eigen::VectorXd out(points.size());
  for (Index j = 0; j < points.size(); ++j) {
    const double x = points[j];
    const double direct = window_sum(sorted, x, bandwidth, false, 0.0);
    const double lower = window_sum(sorted, x, bandwidth, true, 2.0 * support.lower);
    const double upper = window_sum(sorted, x, bandwidth, true, 2.0 * support.upper);
    out[j] = norm * (direct + lower + upper);
  }
  return out;
}

DensityCurve estimate_density(std::span<const double> sample, const Support& support,
                              Index n_grid, std::optional<double> bandwidth) {
  if (sample.empty()) throw std::invalid_argument("estimate_density: empty sample");
  if (!support.valid()) throw std::invalid_argument("estimate_density: support needs L < U");
  if (n_grid < 64) throw std::invalid_argument("estimate_density: n_grid must be at least 64");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(sample);
  if (!(h > 0.0)) throw std::invalid_argument("estimate_density: bandwidth must be positive");

  DensityCurve p;
  p.support = support;
  p.grid = uniform_grid(support.lower, support.upper, n_grid);
  p.values = reflected_kde(sample, support, h, p.grid).cwiseMax(kDensityFloor);
  renormalize(p);
  return p;
}

std::vector<DensityCurve> estimate_panel(const MicroPanel& panel, Index n_grid,
                                         unsigned threads) {
  std::vector<DensityCurve> out(panel.num_periods());
  parallel_for(
      panel.num_periods(),
      [&](std::size_t t) {
        try {
          out[t] = estimate_density(panel.samples[t], panel.support, n_grid);
        } catch (const std::invalid_argument& e) {
          throw DataError("period " + panel.periods[t] + ": " + e.what());
        }
      },
      threads);
  return out;
}

}  // namespace fsvar
