#include "fsvar/lqd_transform.hpp"

#include "fsvar/errors.hpp"
#include "fsvar/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fsvar {

namespace {
// Derivative of y on a uniform grid with spacing h: central differences in the
// interior, one-sided differences at both ends.
Eigen::VectorXd finite_difference(const Eigen::VectorXd& y, double h) {
  const Index n = y.size();
  Eigen::VectorXd d(n);
  d[0] = (y[1] - y[0]) / h;
  d[n - 1] = (y[n - 1] - y[n - 2]) / h;
  for (Index i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
  return d;
}

// Monotone cubic (Fritsch-Carlson / pchip) interpolant through strictly
// increasing knots (xs, ys), evaluated at sorted queries, clamped outside.
Eigen::VectorXd pchip_sorted(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                             const Eigen::VectorXd& queries) {
  const Index n = xs.size();
  Eigen::VectorXd hx(n - 1), d(n - 1), slope(n);
  for (Index k = 0; k + 1 < n; ++k) {
    hx[k] = xs[k + 1] - xs[k];
    d[k] = hx[k] > 0.0 ? (ys[k + 1] - ys[k]) / hx[k] : 0.0;
  }
  for (Index k = 1; k + 1 < n; ++k) {
    if (d[k - 1] <= 0.0 || d[k] <= 0.0) {
      slope[k] = 0.0;
      continue;
    }
    const double w1 = 2.0 * hx[k] + hx[k - 1];
    const double w2 = hx[k] + 2.0 * hx[k - 1];
    slope[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    const double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s < 0.0) return 0.0;
    return std::min(s, 3.0 * d0);
  };
  slope[0] = end_slope(hx[0], hx[1], d[0], d[1]);
  slope[n - 1] = end_slope(hx[n - 2], hx[n - 3], d[n - 2], d[n - 3]);

  Eigen::VectorXd out(queries.size());
  Index k = 0;
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
    while (k + 2 < n && xs[k + 1] <= x) ++k;
    const double w = hx[k];
    if (w <= 0.0) {
      out[q] = ys[k + 1];
      continue;
    }
    const double t = std::clamp((x - xs[k]) / w, 0.0, 1.0);
    const double t2 = t * t, t3 = t2 * t;
    out[q] = (2 * t3 - 3 * t2 + 1) * ys[k] + (t3 - 2 * t2 + t) * w * slope[k] +
             (-2 * t3 + 3 * t2) * ys[k + 1] + (t3 - t2) * w * slope[k + 1];
  }
  return out;
}

// Cell edges on [0, 1] for a uniform grid of m points: every grid point owns
// the cell between the midpoints around it, so the end cells are half as wide.
Eigen::VectorXd cell_edges(Index m) {
  const double h = 1.0 / static_cast<double>(m - 1);
  Eigen::VectorXd e(m + 1);
  e[0] = 0.0;
  for (Index k = 1; k < m; ++k) e[k] = (static_cast<double>(k) - 0.5) * h;
  e[m] = 1.0;
  return e;
}
}  // namespace

LqdCurve lqd_forward(const DensityCurve& p, Index n_grid01) {
  if (n_grid01 < 3) throw std::invalid_argument("lqd_forward: need at least 3 grid points");
  const Index n = p.grid.size();
  if (n < 3 || p.values.size() != n) throw std::invalid_argument("lqd_forward: malformed density curve");
  for (Index i = 0; i < n; ++i)
    if (!(p.values[i] >= 0.0) || !std::isfinite(p.values[i]))
      throw NumericalError("lqd_forward: non-monotone cdf (bad density value at grid point " +
                           std::to_string(i) + ")");
  const double total = trapezoid(p.grid, p.values);
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericalError("lqd_forward: non-monotone cdf (no positive mass)");
  const Eigen::VectorXd dens = p.values / total;
  Eigen::VectorXd cdf = cumulative_trapezoid(p.grid, dens);
  cdf[n - 1] = 1.0;

  // Quantiles at the cell edges. The density is read as piecewise linear, so
  // the cdf is piecewise quadratic and inverts in closed form.
  const Eigen::VectorXd edges = cell_edges(n_grid01);
  Eigen::VectorXd q(edges.size());
  Index i = 0;
  for (Index k = 0; k < edges.size(); ++k) {
    const double u = edges[k];
    while (i + 2 < n && cdf[i + 1] <= u) ++i;
    const double dx = p.grid[i + 1] - p.grid[i];
    const double s = (dens[i + 1] - dens[i]) / dx;
    const double r = std::max(u - cdf[i], 0.0);
    const double den = dens[i] + std::sqrt(std::max(dens[i] * dens[i] + 2.0 * s * r, 0.0));
    const double t = den > 0.0 ? std::min(2.0 * r / den, dx) : 0.0;
    q[k] = p.grid[i] + t;
  }
  q[0] = p.grid[0];
  q[edges.size() - 1] = p.grid[n - 1];

  LqdCurve f;
  f.grid01 = uniform_grid(0.0, 1.0, n_grid01);
  f.support_sup = p.support.upper;
  f.values.resize(n_grid01);
  for (Index j = 0; j < n_grid01; ++j) {
    const double dq = (q[j + 1] - q[j]) / (edges[j + 1] - edges[j]);
    if (!(dq > 0.0))
      throw NumericalError("lqd_forward: quantile function is flat at z = " +
                           std::to_string(f.grid01[j]));
    f.values[j] = std::log(dq);
  }
  return f;
}

DensityCurve lqd_inverse(const LqdCurve& f, const Support& support, Index n_grid) {
  if (!support.valid()) throw std::invalid_argument("lqd_inverse: support needs L < U");
  const Index m = f.grid01.size();
  if (m < 3 || f.values.size() != m) throw std::invalid_argument("lqd_inverse: malformed LQD curve");
  if (n_grid < 3) throw std::invalid_argument("lqd_inverse: need at least 3 density grid points");

  const double fmax = f.values.maxCoeff();
  if (!f.values.allFinite()) {
    std::ostringstream msg;
    msg << "LQD overflow: non-finite values (max " << fmax << ")";
    throw NumericalError(msg.str());
  }
  // theta cancels any additive constant, so shifting by the maximum is exact
  // and keeps exp() in range.
  const Eigen::VectorXd expf = (f.values.array() - fmax).max(-kLqdExpCap).exp().matrix();
  const Eigen::VectorXd edges = cell_edges(m);
  Eigen::VectorXd integral(m + 1);
  integral[0] = 0.0;
  for (Index j = 0; j < m; ++j) integral[j + 1] = integral[j] + (edges[j + 1] - edges[j]) * expf[j];
  const double theta = support.width() / integral[m];
  Eigen::VectorXd quantile = (support.lower + theta * integral.array()).matrix();
  quantile[0] = support.lower;
  quantile[m] = support.upper;

  DensityCurve p;
  p.support = support;
  p.grid = uniform_grid(support.lower, support.upper, n_grid);
  Eigen::VectorXd cdf = pchip_sorted(quantile, edges, p.grid);
  cdf[0] = 0.0;
  cdf[n_grid - 1] = 1.0;
  const double step = support.width() / static_cast<double>(n_grid - 1);
  p.values = finite_difference(cdf, step).cwiseMax(0.0);
  return p;
}

double integrated_squared_error(const DensityCurve& a, const DensityCurve& b) {
  if (a.grid.size() != b.grid.size())
    throw std::invalid_argument("integrated_squared_error: grids differ");
  const Eigen::VectorXd diff2 = (a.values - b.values).array().square().matrix();
  return trapezoid(a.grid, diff2);
}

}  // namespace fsvar
