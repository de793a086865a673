#include "fsvar/flp.hpp"

#include "fsvar/errors.hpp"
#include "fsvar/numeric.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fsvar {

namespace {
struct Design {
  Eigen::MatrixXd X;
  std::vector<std::string> names;
  Index shock_column = 0;
};

// Regressors for target dates t = p .. p + t_len - 1.
Design build_design(const Eigen::MatrixXd& z, Index shock, Index p, Index t_len,
                    const std::vector<std::string>& names) {
  const Index n = z.cols();
  Design d;
  d.X.resize(t_len, 1 + shock + 1 + n * p);
  d.X.col(0).setOnes();
  d.names.push_back("const");
  Index c = 1;
  for (Index j = 0; j <= shock; ++j, ++c) {
    d.X.col(c) = z.col(j).segment(p, t_len);
    d.names.push_back(names[static_cast<std::size_t>(j)] + "[t]");
  }
  d.shock_column = shock + 1;
  for (Index l = 1; l <= p; ++l)
    for (Index j = 0; j < n; ++j, ++c) {
      d.X.col(c) = z.col(j).segment(p - l, t_len);
      d.names.push_back(names[static_cast<std::size_t>(j)] + "[t-" + std::to_string(l) + "]");
    }
  return d;
}

Eigen::MatrixXd solve_ols(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          const std::vector<std::string>& names) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) {
    std::ostringstream msg;
    msg << "rank-deficient design; collinear columns:";
    const auto perm = qr.colsPermutation().indices();
    for (Index i = qr.rank(); i < x.cols(); ++i) msg << ' ' << names[static_cast<std::size_t>(perm[i])];
    throw NumericalError(msg.str());
  }
  return qr.solve(y);
}

std::vector<std::string> default_names(const Eigen::MatrixXd& z, const std::vector<std::string>& names) {
  if (!names.empty()) {
    if (static_cast<Index>(names.size()) != z.cols())
      throw std::invalid_argument("flp_fit: wrong number of names");
    return names;
  }
  std::vector<std::string> out;
  for (Index j = 0; j < z.cols(); ++j) out.push_back("z" + std::to_string(j + 1));
  return out;
}
}  // namespace

Eigen::MatrixXd FlpFit::beta_cov() const {
  const Index k = X.cols(), m = coefficients.cols();
  Eigen::MatrixXd v(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) v(a, b) = hac_cov(a * k + shock_column, b * k + shock_column);
  return v;
}

FlpFit flp_fit(const Eigen::MatrixXd& z, const FlpSpec& spec, Index h,
               const std::vector<std::string>& names, Index lag_truncation, HacKind kind) {
  const Index n = z.cols();
  if (spec.shock < 0 || spec.shock >= n) throw std::invalid_argument("flp_fit: shock column out of range");
  if (spec.responses.empty()) throw std::invalid_argument("flp_fit: no response variables");
  for (Index r : spec.responses)
    if (r < 0 || r >= n) throw std::invalid_argument("flp_fit: response column out of range");
  if (spec.p < 0 || h < 0) throw std::invalid_argument("flp_fit: negative lag order or horizon");
  if (!z.allFinite()) throw DataError("flp_fit: non-finite values in the series");
  const auto nm = default_names(z, names);

  const Index k = 1 + spec.shock + 1 + n * spec.p;
  const Index t_len = z.rows() - spec.p - h;
  if (t_len < k + 1)
    throw DataError("flp_fit: " + std::to_string(t_len) + " observations at horizon " +
                    std::to_string(h) + " for " + std::to_string(k) + " regressors");

  Design d = build_design(z, spec.shock, spec.p, t_len, nm);
  Eigen::MatrixXd y(t_len, static_cast<Index>(spec.responses.size()));
  for (std::size_t i = 0; i < spec.responses.size(); ++i)
    y.col(static_cast<Index>(i)) = z.col(spec.responses[i]).segment(spec.p + h, t_len);

  FlpFit fit;
  fit.horizon = h;
  fit.t_len = t_len;
  fit.shock_column = d.shock_column;
  fit.coefficients = solve_ols(d.X, y, d.names);
  fit.residuals = y - d.X * fit.coefficients;
  fit.X = std::move(d.X);
  fit.regressors = std::move(d.names);

  // innovation of the impulse: its own h = 0 projection on the variables
  // ordered before it and the lags
  {
    Eigen::MatrixXd xa(t_len + h, k - 1);
    const Design full = build_design(z, spec.shock, spec.p, t_len + h, nm);
    xa << full.X.leftCols(full.shock_column), full.X.rightCols(k - full.shock_column - 1);
    std::vector<std::string> an(full.names);
    an.erase(an.begin() + full.shock_column);
    const Eigen::VectorXd u = z.col(spec.shock).segment(spec.p, t_len + h);
    const Eigen::VectorXd e = u - xa * solve_ols(xa, u, an);
    fit.shock_sd = std::sqrt(e.squaredNorm() / static_cast<double>(t_len + h - (k - 1)));
  }

  fit.lag_truncation = lag_truncation >= 0 ? lag_truncation : default_lag_truncation(t_len);
  fit.hac_cov = hac_cov(fit, fit.lag_truncation, kind);
  return fit;
}

Eigen::MatrixXd hac_cov(const FlpFit& fit, Index lag_truncation, HacKind kind) {
  const Index t_len = fit.X.rows(), k = fit.X.cols(), m = fit.residuals.cols();
  if (lag_truncation < 0 || lag_truncation >= t_len)
    throw std::invalid_argument("hac_cov: lag truncation must lie in [0, T)");

  // g_t = e_t (x) x_t, stacked equation by equation
  Eigen::MatrixXd g(t_len, k * m);
  for (Index e = 0; e < m; ++e)
    g.middleCols(e * k, k) = fit.X.array().colwise() * fit.residuals.col(e).array();

  Eigen::MatrixXd s = g.transpose() * g;
  for (Index l = 1; l <= lag_truncation; ++l) {
    const double w = 1.0 - static_cast<double>(l) / static_cast<double>(lag_truncation + 1);
    const Eigen::MatrixXd gl = g.bottomRows(t_len - l).transpose() * g.topRows(t_len - l);
    s += w * (gl + gl.transpose());
  }
  if (kind == HacKind::NeweyWest)
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b)
        if (a != b) s.block(a * k, b * k, k, k).setZero();

  const Eigen::MatrixXd xtx_inv =
      (fit.X.transpose() * fit.X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd cov(k * m, k * m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      cov.block(a * k, b * k, k, k) = xtx_inv * s.block(a * k, b * k, k, k) * xtx_inv;
  return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd flp_score_irf(const std::vector<FlpFit>& fits, double size_sd) {
  if (fits.empty()) throw std::invalid_argument("flp_score_irf: no fits");
  const double sd = fits.front().shock_sd;
  Eigen::MatrixXd out(fits.front().coefficients.cols(), static_cast<Index>(fits.size()));
  for (std::size_t i = 0; i < fits.size(); ++i) out.col(static_cast<Index>(i)) = fits[i].beta() * sd * size_sd;
  return out;
}

FlpIrf flp_functional_irf(const std::vector<FlpFit>& fits, const FpcaModel& model,
                          const Support& support, double size_sd, Index n_sims, std::uint64_t seed,
                          Index n_grid, unsigned threads) {
  if (fits.empty()) throw std::invalid_argument("flp_functional_irf: no fits");
  const Index k = model.num_components();
  if (fits.front().coefficients.cols() != k)
    throw std::invalid_argument("flp_functional_irf: responses do not match the FPCA components");
  std::vector<Index> horizons;
  for (const auto& f : fits) horizons.push_back(f.horizon);
  const double scale = fits.front().shock_sd * size_sd;
  const Index nh = static_cast<Index>(fits.size());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(k);

  FlpIrf out;
  out.point = functional_irf_from_scores(model, zero, {flp_score_irf(fits, size_sd)}, horizons,
                                         support, n_grid, threads);

  std::vector<Eigen::MatrixXd> chol(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) {
    // covariance may be only semidefinite; LDLT copes with zero pivots
    Eigen::LDLT<Eigen::MatrixXd> ldlt(fits[i].beta_cov());
    const Eigen::VectorXd dsq = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd l = ldlt.matrixL();
    chol[i] = ldlt.transpositionsP().transpose() * (l * dsq.asDiagonal());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::MatrixXd> sims(static_cast<std::size_t>(std::max<Index>(n_sims, 0)));
  for (auto& s : sims) {
    s.resize(k, nh);
    for (Index h = 0; h < nh; ++h) {
      Eigen::VectorXd g(k);
      for (Index j = 0; j < k; ++j) g[j] = normal(rng);
      s.col(h) = (fits[static_cast<std::size_t>(h)].beta() + chol[static_cast<std::size_t>(h)] * g) * scale;
    }
  }
  if (!sims.empty())
    out.sims = functional_irf_from_scores(model, zero, sims, horizons, support, n_grid, threads);
  return out;
}

}  // namespace fsvar
