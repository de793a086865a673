#include "fsvar/firf.hpp"

#include "fsvar/errors.hpp"
#include "fsvar/lqd_transform.hpp"
#include "fsvar/numeric.hpp"
#include "fsvar/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace fsvar {

namespace {

void check_horizons(const std::vector<Index>& horizons) {
  if (horizons.empty()) throw std::invalid_argument("no horizons requested");
  for (Index h : horizons)
    if (h < 0) throw std::invalid_argument("negative horizon");
}

struct DrawResult {
  DensityCurve baseline;
  std::vector<Eigen::VectorXd> deltas;
};

DrawResult map_scores(const FpcaModel& model, const Eigen::VectorXd& alpha_ss,
                      const Eigen::MatrixXd& score_irf, const Support& support, Index n_grid) {
  DrawResult r;
  r.baseline = lqd_inverse(reconstruct(model, alpha_ss), support, n_grid);
  r.deltas.reserve(static_cast<std::size_t>(score_irf.cols()));
  for (Index h = 0; h < score_irf.cols(); ++h) {
    const DensityCurve shocked =
        lqd_inverse(reconstruct(model, alpha_ss + score_irf.col(h)), support, n_grid);
    r.deltas.push_back(shocked.values - r.baseline.values);
  }
  return r;
}

double quantile_of(const DensityCurve& p, double q) { return density_quantile(p, q); }
}  // namespace

DensityCurve DistributionalIrf::shocked(Index draw, Index hi) const {
  DensityCurve p = baselines[static_cast<std::size_t>(draw)];
  p.values += deltas[static_cast<std::size_t>(draw)][static_cast<std::size_t>(hi)];
  return p;
}

DistributionalIrf functional_irf(const std::vector<PosteriorDraw>& draws, const FpcaModel& model,
                                 const ShockSpec& shock, const std::vector<Index>& horizons,
                                 const Support& support, Index n_grid, unsigned threads) {
  check_horizons(horizons);
  const Index k = model.num_components();
  const Index h_max = *std::max_element(horizons.begin(), horizons.end());
  std::vector<std::optional<DrawResult>> results(draws.size());

  parallel_for(
      draws.size(),
      [&](std::size_t d) {
        const PosteriorDraw& draw = draws[d];
        if (shock.score_offset < 0 || shock.score_offset + k > draw.n())
          throw std::invalid_argument("functional_irf: score block outside the VAR");
        Eigen::VectorXd mu;
        try {
          mu = unconditional_mean(draw);
        } catch (const NoSteadyStateError&) {
          return;
        }
        const Eigen::MatrixXd irf = structural_irf(draw, shock.shock, shock.size_sd, h_max);
        Eigen::MatrixXd score_irf(k, static_cast<Index>(horizons.size()));
        for (std::size_t i = 0; i < horizons.size(); ++i)
          score_irf.col(static_cast<Index>(i)) = irf.block(shock.score_offset, horizons[i], k, 1);
        results[d] = map_scores(model, mu.segment(shock.score_offset, k), score_irf, support, n_grid);
      },
      threads);

  DistributionalIrf out;
  out.horizons = horizons;
  out.support = support;
  out.grid = uniform_grid(support.lower, support.upper, n_grid);
  for (std::size_t d = 0; d < results.size(); ++d) {
    if (!results[d]) {
      ++out.dropped;
      continue;
    }
    out.kept_draws.push_back(static_cast<Index>(d));
    out.baselines.push_back(std::move(results[d]->baseline));
    out.deltas.push_back(std::move(results[d]->deltas));
  }
  return out;
}

DistributionalIrf functional_irf_from_scores(const FpcaModel& model, const Eigen::VectorXd& alpha_ss,
                                             const std::vector<Eigen::MatrixXd>& score_irfs,
                                             const std::vector<Index>& horizons,
                                             const Support& support, Index n_grid,
                                             unsigned threads) {
  check_horizons(horizons);
  std::vector<DrawResult> results(score_irfs.size());
  parallel_for(
      score_irfs.size(),
      [&](std::size_t d) {
        if (score_irfs[d].cols() != static_cast<Index>(horizons.size()) ||
            score_irfs[d].rows() != model.num_components())
          throw std::invalid_argument("functional_irf_from_scores: score IRF has the wrong shape");
        results[d] = map_scores(model, alpha_ss, score_irfs[d], support, n_grid);
      },
      threads);

  DistributionalIrf out;
  out.horizons = horizons;
  out.support = support;
  out.grid = uniform_grid(support.lower, support.upper, n_grid);
  for (std::size_t d = 0; d < results.size(); ++d) {
    out.kept_draws.push_back(static_cast<Index>(d));
    out.baselines.push_back(std::move(results[d].baseline));
    out.deltas.push_back(std::move(results[d].deltas));
  }
  return out;
}

Eigen::MatrixXd quantile_response(const DistributionalIrf& dirf, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile_response: q must lie in (0, 1)");
  const Index nd = dirf.num_draws(), nh = static_cast<Index>(dirf.horizons.size());
  Eigen::MatrixXd out(nd, nh);
  for (Index d = 0; d < nd; ++d) {
    const double q_ss = quantile_of(dirf.baselines[static_cast<std::size_t>(d)], q);
    if (!(q_ss != 0.0)) throw NumericalError("quantile_response: steady-state quantile is zero");
    for (Index h = 0; h < nh; ++h) out(d, h) = 100.0 * (quantile_of(dirf.shocked(d, h), q) / q_ss - 1.0);
  }
  return out;
}

std::vector<Eigen::MatrixXd> class_share_response(const DistributionalIrf& dirf, Index n_classes) {
  if (n_classes < 2) throw std::invalid_argument("class_share_response: need at least 2 classes");
  const Index nh = static_cast<Index>(dirf.horizons.size());
  const Eigen::VectorXd edges = uniform_grid(dirf.support.lower, dirf.support.upper, n_classes + 1);
  auto shares = [&](const DensityCurve& p) {
    Eigen::VectorXd s(n_classes);
    for (Index c = 0; c < n_classes; ++c)
      s[c] = integrate_linear_between(p.grid, p.values, edges[c], edges[c + 1]);
    return s;
  };
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(dirf.num_draws()));
  for (Index d = 0; d < dirf.num_draws(); ++d) {
    const Eigen::VectorXd base = shares(dirf.baselines[static_cast<std::size_t>(d)]);
    Eigen::MatrixXd m(n_classes, nh);
    for (Index h = 0; h < nh; ++h) m.col(h) = shares(dirf.shocked(d, h)) - base;
    out.push_back(std::move(m));
  }
  return out;
}

double gini(const DensityCurve& p) {
  if (p.support.lower < 0.0) throw std::invalid_argument("gini: support must be non-negative");
  const double total = trapezoid(p.grid, p.values);
  if (!(total > 0.0)) throw NumericalError("gini: density has zero mass");
  // 1 - 2 int L(u) du equals 1 - (1 / mu) int_0^inf (1 - F)^2 dx for x >= 0. With p
  // linear per cell, x p is quadratic and (1 - F)^2 quartic, so 3-point Gauss is exact.
  const double gx[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double mu = 0.0, tail = p.support.lower, cdf = 0.0;
  for (Index i = 0; i + 1 < p.size(); ++i) {
    const double dx = p.grid[i + 1] - p.grid[i];
    const double a = p.values[i] / total, b = p.values[i + 1] / total;
    for (int g = 0; g < 3; ++g) {
      const double t = gx[g] * dx;
      const double dens = a + (b - a) * gx[g];
      const double f = cdf + a * t + 0.5 * (b - a) * gx[g] * t;
      mu += gw[g] * dx * (p.grid[i] + t) * dens;
      tail += gw[g] * dx * (1.0 - f) * (1.0 - f);
    }
    cdf += 0.5 * (a + b) * dx;
  }
  if (!(mu > 0.0)) throw NumericalError("gini: zero mean");
  return 1.0 - tail / mu;
}

Eigen::MatrixXd gini_response(const DistributionalIrf& dirf, bool percent) {
  const Index nd = dirf.num_draws(), nh = static_cast<Index>(dirf.horizons.size());
  Eigen::MatrixXd out(nd, nh);
  for (Index d = 0; d < nd; ++d) {
    const double g_ss = gini(dirf.baselines[static_cast<std::size_t>(d)]);
    for (Index h = 0; h < nh; ++h) {
      const double g = gini(dirf.shocked(d, h));
      out(d, h) = percent ? 100.0 * (g / g_ss - 1.0) : g - g_ss;
    }
  }
  return out;
}

Band pointwise_band(const Eigen::MatrixXd& samples, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("band level must lie in (0, 1)");
  if (samples.rows() == 0) throw std::invalid_argument("pointwise_band: no samples");
  const Index nc = samples.cols();
  Band b{Eigen::VectorXd(nc), Eigen::VectorXd(nc), Eigen::VectorXd(nc)};
  std::vector<double> col(static_cast<std::size_t>(samples.rows()));
  const double tail = 0.5 * (1.0 - level);
  for (Index c = 0; c < nc; ++c) {
    for (Index r = 0; r < samples.rows(); ++r) col[static_cast<std::size_t>(r)] = samples(r, c);
    b.median[c] = sample_quantile(col, 0.5);
    b.lower[c] = sample_quantile(col, tail);
    b.upper[c] = sample_quantile(col, 1.0 - tail);
  }
  return b;
}

Eigen::MatrixXd deltas_at(const DistributionalIrf& dirf, Index hi) {
  Eigen::MatrixXd m(dirf.num_draws(), dirf.grid.size());
  for (Index d = 0; d < dirf.num_draws(); ++d)
    m.row(d) = dirf.deltas[static_cast<std::size_t>(d)][static_cast<std::size_t>(hi)].transpose();
  return m;
}

Eigen::VectorXd median_delta(const DistributionalIrf& dirf, Index hi) {
  return pointwise_band(deltas_at(dirf, hi), 0.5).median;
}

}  // namespace fsvar
