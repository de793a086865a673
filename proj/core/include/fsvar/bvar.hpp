#pragma once

#include "fsvar/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fsvar {

inline constexpr double kDefaultLambda1 = 0.2;
inline constexpr double kDefaultLambda2 = 2.0;
inline constexpr double kInterceptPriorVariance = 1e3;
inline constexpr Index kDefaultDraws = 1000;

/// z_t = Pi x_t + u_t with x_t = [1, z_{t-1}', ..., z_{t-p}']'.
/// Y is (T - p) x n and X is (T - p) x m, m = n p + 1.
struct VarData {
  Eigen::MatrixXd z;
  std::vector<std::string> names;
  Index p = 1;
  Eigen::MatrixXd Y;
  Eigen::MatrixXd X;

  [[nodiscard]] Index n() const { return z.cols(); }
  [[nodiscard]] Index m() const { return n() * p + 1; }
  [[nodiscard]] Index t_eff() const { return Y.rows(); }
};

VarData make_var_data(const Eigen::MatrixXd& z, Index p, std::vector<std::string> names = {});

/// Natural conjugate Normal-Inverse-Wishart prior.
///
/// Orientation: `Psi` is stored m x n, i.e. as the prior mean of Pi' (the
/// regression-coefficient layout used by X'Y), so that Gamma^{-1} Psi and
/// Psi' Gamma^{-1} Psi are conformable. Row 1 + (l-1) n + j holds the lag-l
/// coefficients on variable j.
struct NiwPrior {
  Eigen::MatrixXd Psi;    // m x n
  Eigen::VectorXd Gamma;  // diagonal of the m x m prior variance
  double nu = 0.0;
  Eigen::MatrixXd Phi;    // n x n
  double lambda1 = kDefaultLambda1;
  double lambda2 = kDefaultLambda2;
  Eigen::VectorXd sigma;  // AR(1) residual variances
};

struct NiwPosterior {
  Eigen::MatrixXd Gamma_bar;  // m x m
  Eigen::MatrixXd Psi_bar;    // m x n
  double nu_bar = 0.0;
  Eigen::MatrixXd Phi_bar;    // n x n
};

struct PosteriorDraw {
  Eigen::MatrixXd Pi;     // n x m, intercept first
  Eigen::MatrixXd Omega;  // n x n
  Eigen::MatrixXd A0inv;  // lower Cholesky factor of Omega

  [[nodiscard]] Index n() const { return Pi.rows(); }
  [[nodiscard]] Index p() const { return (Pi.cols() - 1) / Pi.rows(); }
  /// Lag-l coefficient block (1-based l).
  [[nodiscard]] Eigen::MatrixXd lag(Index l) const { return Pi.block(0, 1 + (l - 1) * n(), n(), n()); }
  [[nodiscard]] Eigen::VectorXd intercept() const { return Pi.col(0); }
};

/// Residual variance of an OLS AR(1) with intercept, one entry per column.
/// Throws DataError for constant series.
Eigen::VectorXd ar1_residual_variances(const Eigen::MatrixXd& z);

/// Minnesota-style prior. Psi has a 1 on the own first lag of every flagged
/// variable; Gamma is 1e3 for the intercept and lambda1^2 / (sigma_j l^lambda2)
/// for lag l of variable j; nu = n + 2; Phi = diag(sigma).
/// `warning`, if given, receives a note when T - p <= n p + 1.
NiwPrior build_minnesota_prior(const VarData& data, double lambda1, double lambda2,
                               const std::vector<bool>& persistent, std::string* warning = nullptr);

/// Closed-form posterior hyperparameters; nu_bar = nu + (T - p).
NiwPosterior posterior_moments(const NiwPrior& prior, const VarData& data);

/// Direct Monte Carlo from the posterior: Omega ~ IW(nu_bar, Phi_bar) by the
/// Bartlett decomposition, then Pi' = Psi_bar + chol(Gamma_bar) G chol(Omega)'.
///
/// Draws are generated in chunks of kDrawChunk; chunk c uses its own
/// mt19937_64 seeded with derive_seed(seed, c), so the sequence depends on
/// the seed only, not on `threads`.
inline constexpr Index kDrawChunk = 64;
std::vector<PosteriorDraw> sample_posterior(const NiwPosterior& post, Index n_draws,
                                            std::uint64_t seed, unsigned threads = 0);

/// (n p) x (n p) companion matrix of the lag blocks.
Eigen::MatrixXd companion_matrix(const PosteriorDraw& draw);
bool is_explosive(const PosteriorDraw& draw);

/// Response of z_{t+h}, h = 0..h_max, to a `size_sd` standard deviation
/// structural shock `shock` (0-based). Column h is the horizon-h response.
Eigen::MatrixXd structural_irf(const PosteriorDraw& draw, Index shock, double size_sd, Index h_max);

/// (I - sum_l Pi_l)^{-1} c. Throws NoSteadyStateError when the companion
/// matrix has spectral radius >= 1.
Eigen::VectorXd unconditional_mean(const PosteriorDraw& draw);

/// Equation-by-equation OLS coefficients (m x n layout), for diagnostics.
Eigen::MatrixXd ols_coefficients(const VarData& data);

}  // namespace fsvar
