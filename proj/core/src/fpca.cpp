#include "fsvar/fpca.hpp"

#include "fsvar/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsvar {

namespace {
std::vector<double> squared_singular_values(const Eigen::MatrixXd& z) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(z);
  const Eigen::VectorXd s = svd.singularValues();
  std::vector<double> out(static_cast<std::size_t>(s.size()));
  for (Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s[i] * s[i];
  return out;
}

void check_same_grid(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a != b) throw DataError("LQD curves do not share one grid");
}
}  // namespace

LqdPanel make_lqd_panel(std::vector<LqdCurve> curves, std::vector<std::string> times) {
  if (curves.empty()) throw DataError("empty LQD panel");
  const Index t_len = static_cast<Index>(curves.size());
  const Index nz = curves.front().size();
  if (times.empty())
    for (Index t = 0; t < t_len; ++t) times.push_back(std::to_string(t));
  if (static_cast<Index>(times.size()) != t_len)
    throw std::invalid_argument("make_lqd_panel: labels and curves differ in length");

  LqdPanel panel;
  panel.mean_curve.grid01 = curves.front().grid01;
  panel.mean_curve.support_sup = curves.front().support_sup;
  panel.mean_curve.values = Eigen::VectorXd::Zero(nz);
  panel.demeaned.resize(t_len, nz);
  for (Index t = 0; t < t_len; ++t) {
    const auto& c = curves[static_cast<std::size_t>(t)];
    check_same_grid(c.grid01, panel.mean_curve.grid01);
    if (!c.values.allFinite()) throw DataError("LQD curve " + times[static_cast<std::size_t>(t)] +
                                               " has non-finite values");
    panel.demeaned.row(t) = c.values.transpose();
  }
  panel.mean_curve.values = panel.demeaned.colwise().mean().transpose();
  panel.demeaned.rowwise() -= panel.mean_curve.values.transpose();
  panel.times = std::move(times);
  panel.curves = std::move(curves);
  return panel;
}

LqdPanel make_panel_from_matrix(const Eigen::MatrixXd& rows, const Eigen::VectorXd& grid,
                                double support_sup) {
  if (rows.cols() != grid.size()) throw std::invalid_argument("make_panel_from_matrix: shape");
  std::vector<LqdCurve> curves(static_cast<std::size_t>(rows.rows()));
  for (Index t = 0; t < rows.rows(); ++t) {
    auto& c = curves[static_cast<std::size_t>(t)];
    c.grid01 = grid;
    c.values = rows.row(t).transpose();
    c.support_sup = support_sup;
  }
  return make_lqd_panel(std::move(curves));
}

FpcaModel FpcaModel::truncated(Index k) const {
  if (k < 1 || k > num_components())
    throw std::invalid_argument("FpcaModel::truncated: K out of range");
  FpcaModel m;
  m.mean_curve = mean_curve;
  m.basis = basis.leftCols(k);
  m.scores = scores.leftCols(k);
  m.singular_values = singular_values.head(k);
  m.explained_shares = explained_shares.head(k);
  m.total_variance = total_variance;
  return m;
}

FpcaModel fit_fpca(const LqdPanel& panel, Index k) {
  const Index t_len = panel.num_times();
  const Index nz = panel.grid_size();
  if (k < 1 || k > std::min(t_len, nz))
    throw std::invalid_argument("fit_fpca: K = " + std::to_string(k) + " out of range [1, " +
                                std::to_string(std::min(t_len, nz)) + "]");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(panel.demeaned, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();

  FpcaModel m;
  m.mean_curve = panel.mean_curve;
  m.basis = svd.matrixV().leftCols(k);
  m.scores = svd.matrixU().leftCols(k) * s.head(k).asDiagonal();
  m.singular_values = s.head(k);
  m.total_variance = s.squaredNorm();
  for (Index j = 0; j < k; ++j) {
    Index arg = 0;
    m.basis.col(j).cwiseAbs().maxCoeff(&arg);
    if (m.basis(arg, j) < 0.0) {
      m.basis.col(j) *= -1.0;
      m.scores.col(j) *= -1.0;
    }
  }
  m.explained_shares = m.total_variance > 0.0
                           ? Eigen::VectorXd(s.head(k).array().square() / m.total_variance)
                           : Eigen::VectorXd::Zero(k);
  return m;
}

Eigen::VectorXd cumulative_explained(const LqdPanel& panel) {
  const auto sq = squared_singular_values(panel.demeaned);
  double total = 0.0;
  for (double v : sq) total += v;
  Eigen::VectorXd out(static_cast<Index>(sq.size()));
  double acc = 0.0;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    acc += sq[i];
    out[static_cast<Index>(i)] = total > 0.0 ? acc / total : 1.0;
  }
  return out;
}

Index select_k_scree(const LqdPanel& panel, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("select_k_scree: threshold must lie in (0, 1]");
  const Eigen::VectorXd cum = cumulative_explained(panel);
  // 1e-12 absorbs rounding in the running sum so threshold 1 stops at full rank
  for (Index k = 0; k < cum.size(); ++k)
    if (cum[k] >= threshold - 1e-12) return k + 1;
  return cum.size();
}

Eigen::VectorXd project_scores(const FpcaModel& model, const LqdCurve& curve) {
  if (curve.grid01.size() != model.mean_curve.grid01.size() ||
      curve.grid01 != model.mean_curve.grid01)
    throw DataError("project_scores: grid mismatch");
  const Eigen::VectorXd dev = curve.values - model.mean_curve.values;
  // basis is orthonormal, but solve the normal equations anyway so truncated or
  // externally edited bases still give least-squares coordinates
  return (model.basis.transpose() * model.basis).ldlt().solve(model.basis.transpose() * dev);
}

LqdCurve reconstruct(const FpcaModel& model, const Eigen::VectorXd& scores) {
  if (scores.size() != model.num_components())
    throw std::invalid_argument("reconstruct: expected " + std::to_string(model.num_components()) +
                                " scores");
  LqdCurve c = model.mean_curve;
  c.values += model.basis * scores;
  return c;
}

}  // namespace fsvar
