#pragma once

#include "fsvar/firf.hpp"
#include "fsvar/fpca.hpp"
#include "fsvar/types.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace fsvar {

enum class HacKind {
  DriscollKraay,  // stacked system moments, captures cross-equation correlation
  NeweyWest       // equation by equation, cross-equation blocks set to zero
};

/// Columns of z used by a local projection. Variables ordered before `shock`
/// enter contemporaneously as controls; all variables enter with `p` lags.
struct FlpSpec {
  Index shock = 0;               // 0-based column of the impulse variable
  std::vector<Index> responses;  // columns projected forward (the scores)
  Index p = 1;
};

struct FlpFit {
  Index horizon = 0;
  Index t_len = 0;                    // usable observations T_h
  std::vector<std::string> regressors;
  Index shock_column = 0;             // position of the impulse among regressors
  Eigen::MatrixXd X;                  // T_h x k
  Eigen::MatrixXd coefficients;       // k x K
  Eigen::MatrixXd residuals;          // T_h x K
  double shock_sd = 1.0;              // sd of the impulse innovation
  Index lag_truncation = 0;
  Eigen::MatrixXd hac_cov;            // (k K) x (k K), vec over equations

  /// beta_{1,U}^h: impact coefficients on the impulse, one per response.
  [[nodiscard]] Eigen::VectorXd beta() const { return coefficients.row(shock_column).transpose(); }
  /// Covariance of beta() taken from hac_cov.
  [[nodiscard]] Eigen::MatrixXd beta_cov() const;
};

inline Index default_lag_truncation(Index t_len) {
  return static_cast<Index>(std::floor(1.3 * std::sqrt(static_cast<double>(t_len))));
}

/// Least-squares projection of z_{t+h}[responses] on
/// [1, z_t[0..shock), z_t[shock], z_{t-1}', ..., z_{t-p}'].
/// hac_cov is filled with the Driscoll-Kraay estimator at floor(1.3 sqrt(T_h)) lags
/// unless `lag_truncation` >= 0 is given.
FlpFit flp_fit(const Eigen::MatrixXd& z, const FlpSpec& spec, Index h,
               const std::vector<std::string>& names = {}, Index lag_truncation = -1,
               HacKind kind = HacKind::DriscollKraay);

/// Bartlett-kernel HAC covariance of vec(coefficients).
Eigen::MatrixXd hac_cov(const FlpFit& fit, Index lag_truncation,
                        HacKind kind = HacKind::DriscollKraay);

/// One-standard-deviation impulse responses of the responses (K x horizons),
/// i.e. beta_h * shock_sd_0 * size_sd, with the shock sd from the h = 0 fit.
Eigen::MatrixXd flp_score_irf(const std::vector<FlpFit>& fits, double size_sd = 1.0);

struct FlpIrf {
  DistributionalIrf point;  // one "draw": the point estimate
  DistributionalIrf sims;   // parametric draws from N(beta_h, cov_h)
};

/// Density responses around the sample-mean LQD: p_ss = lqd_inverse(mean),
/// delta_h = lqd_inverse(mean + D beta_h sd) - p_ss. Bands come from pushing
/// `n_sims` Gaussian coefficient draws through the same map.
FlpIrf flp_functional_irf(const std::vector<FlpFit>& fits, const FpcaModel& model,
                          const Support& support, double size_sd = 1.0, Index n_sims = 500,
                          std::uint64_t seed = 1, Index n_grid = 1000, unsigned threads = 0);

}  // namespace fsvar
