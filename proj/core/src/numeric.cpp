#include "fsvar/numeric.hpp"

#include "fsvar/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fsvar {

namespace {
std::atomic<std::uint64_t> g_renormalizations{0};

// Segment index i with xs[i] <= x < xs[i+1], clamped to [0, n-2].
Index segment_of(const Eigen::VectorXd& xs, double x) {
  const double* begin = xs.data();
  const double* end = begin + xs.size();
  const auto it = std::upper_bound(begin, end, x);
  const Index i = static_cast<Index>(it - begin) - 1;
  return std::clamp<Index>(i, 0, xs.size() - 2);
}

double lerp_segment(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, Index i, double x) {
  const double dx = xs[i + 1] - xs[i];
  if (dx <= 0.0) return ys[i + 1];
  const double w = (x - xs[i]) / dx;
  return ys[i] + w * (ys[i + 1] - ys[i]);
}
}  // namespace

Eigen::VectorXd uniform_grid(double a, double b, Index n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  Eigen::VectorXd g(n);
  const double step = (b - a) / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i) g[i] = a + step * static_cast<double>(i);
  g[n - 1] = b;
  return g;
}

double trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (Index i = 0; i + 1 < x.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd c(x.size());
  if (x.size() == 0) return c;
  c[0] = 0.0;
  for (Index i = 0; i + 1 < x.size(); ++i)
    c[i + 1] = c[i] + 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return c;
}

double interp_linear(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double x) {
  const Index n = xs.size();
  if (x <= xs[0]) return ys[0];
  if (x >= xs[n - 1]) return ys[n - 1];
  return lerp_segment(xs, ys, segment_of(xs, x), x);
}

Eigen::VectorXd interp_linear_sorted(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                     const Eigen::VectorXd& queries) {
  const Index n = xs.size();
  Eigen::VectorXd out(queries.size());
  Index i = 0;
  for (Index q = 0; q < queries.size(); ++q) {
    const double x = queries[q];
    if (x <= xs[0]) {
      out[q] = ys[0];
      continue;
    }
    if (x >= xs[n - 1]) {
      out[q] = ys[n - 1];
      continue;
    }
    while (i + 2 < n && xs[i + 1] <= x) ++i;
    out[q] = lerp_segment(xs, ys, i, x);
  }
  return out;
}

double integrate_linear_between(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double a,
                                double b) {
  const Index n = x.size();
  a = std::max(a, x[0]);
  b = std::min(b, x[n - 1]);
  if (b <= a) return 0.0;
  double s = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    const double lo = std::max(a, x[i]);
    const double hi = std::min(b, x[i + 1]);
    if (hi <= lo) continue;
    s += 0.5 * (lerp_segment(x, y, i, lo) + lerp_segment(x, y, i, hi)) * (hi - lo);
  }
  return s;
}

double density_quantile(const DensityCurve& p, double u) {
  const Eigen::VectorXd cdf = cumulative_trapezoid(p.grid, p.values);
  const double total = cdf[cdf.size() - 1];
  if (!(total > 0.0)) throw NumericalError("density_quantile: density has zero mass");
  return interp_linear(cdf, p.grid, u * total);
}

void renormalize(DensityCurve& p) {
  ++g_renormalizations;
  const double mass = trapezoid(p.grid, p.values);
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw NumericalError("renormalize: density has no finite positive mass");
  p.values /= mass;
}

std::uint64_t renormalization_count() { return g_renormalizations.load(); }
void reset_renormalization_count() { g_renormalizations.store(0); }

double sample_quantile(std::span<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double vlo = values[lo];
  if (hi == lo) return vlo;
  const double vhi = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1,
                                       values.end());
  return vlo + (pos - static_cast<double>(lo)) * (vhi - vlo);
}

double sample_mean(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  const double m = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double denom = std::sqrt((da * da).sum() * (db * db).sum());
  if (denom == 0.0) return 0.0;
  return (da * db).sum() / denom;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace fsvar
