#pragma once

#include "fsvar/bvar.hpp"
#include "fsvar/fpca.hpp"
#include "fsvar/types.hpp"

#include <vector>

namespace fsvar {

inline constexpr double kApplicationBand = 0.68;
inline constexpr double kSimulationBand = 0.90;

/// Density responses p_{ss+h} - p_ss per posterior draw and horizon.
struct DistributionalIrf {
  std::vector<Index> horizons;
  Support support;
  Eigen::VectorXd grid;
  std::vector<DensityCurve> baselines;                // p_ss per kept draw
  std::vector<std::vector<Eigen::VectorXd>> deltas;   // [draw][horizon index]
  std::vector<Index> kept_draws;                      // indices into the input draws
  Index dropped = 0;                                  // draws without a steady state

  [[nodiscard]] Index num_draws() const { return static_cast<Index>(deltas.size()); }
  [[nodiscard]] DensityCurve shocked(Index draw, Index hi) const;
};

/// Where the FPC scores sit inside z_t and which structural shock to trace.
struct ShockSpec {
  Index score_offset = 0;  // first score column in z_t
  Index shock = 0;         // 0-based column of z_t
  double size_sd = 1.0;
};

/// For every draw: alpha_ss from unconditional_mean, f_ss = reconstruct(alpha_ss),
/// p_ss = lqd_inverse(f_ss); then the same with alpha_ss + IRF_alpha,h. Draws
/// with an explosive companion matrix are dropped and counted. No density is
/// ever rescaled: unit mass comes from lqd_inverse itself.
DistributionalIrf functional_irf(const std::vector<PosteriorDraw>& draws, const FpcaModel& model,
                                 const ShockSpec& shock, const std::vector<Index>& horizons,
                                 const Support& support, Index n_grid = 1000, unsigned threads = 0);

/// Same map for a single known score path: baseline scores and score IRF per
/// horizon (columns). Used for true responses and for local projections.
DistributionalIrf functional_irf_from_scores(const FpcaModel& model, const Eigen::VectorXd& alpha_ss,
                                             const std::vector<Eigen::MatrixXd>& score_irfs,
                                             const std::vector<Index>& horizons,
                                             const Support& support, Index n_grid = 1000,
                                             unsigned threads = 0);

/// 100 (Q_h(q) / Q_ss(q) - 1); rows are draws, columns horizons.
Eigen::MatrixXd quantile_response(const DistributionalIrf& dirf, double q);

/// Share change of each of `n_classes` equal-width sub-intervals of the
/// support. Element [draw] is n_classes x horizons.
std::vector<Eigen::MatrixXd> class_share_response(const DistributionalIrf& dirf, Index n_classes);

/// 1 - 2 int_0^1 L(u) du, computed exactly for the piecewise-linear density.
double gini(const DensityCurve& p);

/// G_h - G_ss (or percent change when `percent`); rows are draws.
Eigen::MatrixXd gini_response(const DistributionalIrf& dirf, bool percent = false);

struct Band {
  Eigen::VectorXd median, lower, upper;
};

/// Pointwise equal-tailed band across samples (rows of `samples`).
Band pointwise_band(const Eigen::MatrixXd& samples, double level);

/// Pointwise median of the deltas at one horizon index.
Eigen::VectorXd median_delta(const DistributionalIrf& dirf, Index hi);

/// Stacks the deltas of one horizon index into a draws x grid matrix.
Eigen::MatrixXd deltas_at(const DistributionalIrf& dirf, Index hi);

}  // namespace fsvar
