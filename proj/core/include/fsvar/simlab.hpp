#pragma once

#include "fsvar/bvar.hpp"
#include "fsvar/firf.hpp"
#include "fsvar/fpca.hpp"
#include "fsvar/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fsvar {

/// How factor scores become densities in a simulated design.
enum class BasisKind {
  Lqd,        // f = mean + basis * alpha is an LQD, density via lqd_inverse
  LogDensity  // log p = mean + basis * alpha, then exponentiate and normalize
};

std::string to_string(BasisKind k);
BasisKind basis_kind_from_string(const std::string& s);

/// Basis functions extracted from random Beta-mixed Gamma densities.
/// Columns of `basis` are the leading FPCA components of the realizations
/// scaled to Euclidean norm 10, matching the averaged simulation covariance.
struct GammaMixtureBasis {
  BasisKind kind = BasisKind::Lqd;
  Support support;
  Eigen::VectorXd grid;    // [0, 1] grid (LQD) or support grid (log density)
  Eigen::VectorXd mean;
  Eigen::MatrixXd basis;   // grid x K_true
  std::vector<DensityCurve> realizations;
};

/// q(x) = int_0^1 Gamma(x; shape 1 + 2w, scale 1) Beta(w; a, b) dw with
/// a, b ~ U(0, 3), evaluated on `n_grid` points over the support, censored to
/// it and renormalized.
DensityCurve gamma_mixture_density(double a, double b, const Support& support, Index n_grid);

GammaMixtureBasis build_gamma_mixture_basis(BasisKind kind, const Support& support,
                                            Index n_realizations, Index k_true, std::uint64_t seed,
                                            Index n_grid = 1000);

/// Lag matrices of the simulation VAR; returns the n x (1 + n p) matrix [Pi0, Pi1, ..., Pi4].
Eigen::MatrixXd design_var_coefficients();

/// Average of 100 outer products r r' where r in R^5 has entries 0.1 * N1 * N2.
Eigen::MatrixXd design_var_covariance(std::uint64_t seed);

struct DgpSpec {
  BasisKind kind = BasisKind::Lqd;
  Support support{0.0, 6.0};
  Index n_micro = 8000;
  Index t_len = 500;
  Index burn_in = 500;
  Index n_grid = 1000;
  Index n_v = 2;
  Index k_true = 3;
  std::uint64_t structure_seed = 0;
  PosteriorDraw truth;  // Pi, Omega and its Cholesky factor
  GammaMixtureBasis basis;

  [[nodiscard]] Index p() const { return truth.p(); }
};

/// Builds the design: coefficient matrices, Omega from `structure_seed`, and
/// the 50-realization basis of the given kind. Throws if the VAR is not stable.
DgpSpec make_dgp_spec(BasisKind kind, std::uint64_t structure_seed = 20240611);

/// Density implied by a score vector under the design's basis.
DensityCurve density_from_scores(const DgpSpec& spec, const Eigen::VectorXd& alpha);

struct SimulatedData {
  Eigen::MatrixXd z;  // T x (n_v + K_true): [y, alpha]
  std::vector<DensityCurve> densities;
  MicroPanel micro;

  [[nodiscard]] Eigen::MatrixXd y() const { return z.leftCols(2); }
  [[nodiscard]] Eigen::MatrixXd alpha() const { return z.rightCols(z.cols() - 2); }
};

/// Simulates the VAR (after burn-in), maps scores to densities and draws
/// `n_micro` points per period by inverse-cdf sampling.
SimulatedData simulate_dgp(const DgpSpec& spec, std::uint64_t seed, unsigned threads = 0);

/// Exact density responses to structural shock `shock` of the design VAR.
DistributionalIrf true_functional_irf(const DgpSpec& spec, Index shock, double size_sd,
                                      const std::vector<Index>& horizons);

/// Kernel densities -> LQD -> FPCA panel from a simulated (or real) micro panel.
struct EstimatedPanel {
  std::vector<DensityCurve> densities;
  LqdPanel lqd;
};
EstimatedPanel estimate_lqd_panel(const MicroPanel& micro, Index n_grid, unsigned threads = 0);

struct McConfig {
  std::vector<Index> k_list{1, 2, 3, 5, 7, 15};
  bool include_scree = false;
  double scree_threshold = 0.90;
  std::vector<Index> horizons{0, 1, 2, 3, 4, 8, 12, 24};
  std::vector<Index> shocks{0, 1};
  Index n_reps = 20;
  Index n_draws = 200;
  Index p = 4;
  double lambda1 = kDefaultLambda1;
  double lambda2 = kDefaultLambda2;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct McRow {
  Index shock = 0;
  Index horizon = 0;
  std::string k_label;  // "3", or "scree"
  double mean_corr = 0.0;
  Eigen::VectorXd per_rep;
};

struct McResult {
  std::vector<McRow> rows;
  Index dropped_draws = 0;
  [[nodiscard]] double corr(Index shock, Index horizon, const std::string& k) const;
};

/// Regenerates data n_reps times, runs density -> LQD -> FPCA(K) -> BVAR ->
/// median functional IRF and averages the Pearson correlation with the truth
/// per (shock, horizon, K).
McResult mc_correlation_study(const DgpSpec& spec, const McConfig& cfg);

enum class Transform { Identity, Log, Lqd };
std::string to_string(Transform t);

struct MiseConfig {
  Index k_max = 5;
  Index n_reps = 100;
  double train_share = 0.8;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct MiseResult {
  std::vector<Transform> transforms{Transform::Identity, Transform::Log, Transform::Lqd};
  Eigen::MatrixXd mise;   // transforms x K, average over reps
  Eigen::MatrixXd ratio;  // mise / mise(identity, K = 1)
};

/// Cross-validated FPCA approximation error in density space for the three
/// transforms, on kernel estimates of one simulated panel.
MiseResult mise_cv_study(const DgpSpec& spec, const MiseConfig& cfg);

/// Same study on a given set of densities sharing one grid.
MiseResult mise_cv_on_densities(const std::vector<DensityCurve>& densities, const MiseConfig& cfg);

}  // namespace fsvar
