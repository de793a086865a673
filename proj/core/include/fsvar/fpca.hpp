#pragma once

#include "fsvar/types.hpp"

#include <string>
#include <vector>

namespace fsvar {

/// LQD curves over time on a shared [0, 1] grid, with their time mean removed.
struct LqdPanel {
  std::vector<std::string> times;
  std::vector<LqdCurve> curves;
  LqdCurve mean_curve;
  Eigen::MatrixXd demeaned;  // T x N_Z

  [[nodiscard]] Index num_times() const { return demeaned.rows(); }
  [[nodiscard]] Index grid_size() const { return demeaned.cols(); }
};

/// Builds the panel: checks that every curve uses the same grid, takes the
/// arithmetic mean and stacks the deviations row by row.
LqdPanel make_lqd_panel(std::vector<LqdCurve> curves, std::vector<std::string> times = {});

/// Same for plain curves sampled on a common grid (identity/log transforms).
LqdPanel make_panel_from_matrix(const Eigen::MatrixXd& rows, const Eigen::VectorXd& grid,
                                double support_sup = 1.0);

struct FpcaModel {
  LqdCurve mean_curve;
  Eigen::MatrixXd basis;            // N_Z x K, orthonormal columns
  Eigen::MatrixXd scores;           // T x K
  Eigen::VectorXd singular_values;  // K
  Eigen::VectorXd explained_shares; // K, share of total squared singular values
  double total_variance = 0.0;      // sum of all squared singular values

  [[nodiscard]] Index num_components() const { return basis.cols(); }

  /// First k components of this model (k <= K).
  [[nodiscard]] FpcaModel truncated(Index k) const;
};

/// Rank-K truncated SVD of the demeaned panel. Each basis column is signed so
/// that its largest-magnitude entry is positive; scores are U * S with the
/// matching signs.
FpcaModel fit_fpca(const LqdPanel& panel, Index k);

/// Cumulative explained variance for every possible K (length min(T, N_Z)).
Eigen::VectorXd cumulative_explained(const LqdPanel& panel);

/// Smallest K whose cumulative explained share reaches `threshold`.
Index select_k_scree(const LqdPanel& panel, double threshold = 0.90);

/// Least-squares coordinates of curve - mean in the basis.
Eigen::VectorXd project_scores(const FpcaModel& model, const LqdCurve& curve);

/// mean + basis * scores.
LqdCurve reconstruct(const FpcaModel& model, const Eigen::VectorXd& scores);

}  // namespace fsvar
