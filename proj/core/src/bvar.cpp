#include "fsvar/bvar.hpp"

#include "fsvar/errors.hpp"
#include "fsvar/numeric.hpp"
#include "fsvar/parallel.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fsvar {

namespace {
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& a, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericalError(std::string("Cholesky factorization failed for ") + what);
  return llt.matrixL();
}
}  // namespace

VarData make_var_data(const Eigen::MatrixXd& z, Index p, std::vector<std::string> names) {
  if (p < 1) throw std::invalid_argument("make_var_data: lag order must be at least 1");
  if (z.cols() < 1) throw std::invalid_argument("make_var_data: no variables");
  if (z.rows() < p) throw DataError("make_var_data: fewer observations than lags");
  if (!z.allFinite()) throw DataError("make_var_data: non-finite values in the series");
  const Index n = z.cols();
  const Index t_eff = z.rows() - p;
  if (names.empty())
    for (Index j = 0; j < n; ++j) names.push_back("z" + std::to_string(j + 1));
  if (static_cast<Index>(names.size()) != n)
    throw std::invalid_argument("make_var_data: wrong number of names");

  VarData d;
  d.z = z;
  d.names = std::move(names);
  d.p = p;
  d.Y = z.bottomRows(t_eff);
  d.X.resize(t_eff, n * p + 1);
  d.X.col(0).setOnes();
  for (Index l = 1; l <= p; ++l) d.X.block(0, 1 + (l - 1) * n, t_eff, n) = z.middleRows(p - l, t_eff);
  return d;
}

Eigen::VectorXd ar1_residual_variances(const Eigen::MatrixXd& z) {
  const Index t_len = z.rows();
  if (t_len < 4) throw DataError("AR(1) variance needs at least 4 observations");
  Eigen::VectorXd out(z.cols());
  for (Index j = 0; j < z.cols(); ++j) {
    Eigen::MatrixXd x(t_len - 1, 2);
    x.col(0).setOnes();
    x.col(1) = z.col(j).head(t_len - 1);
    const Eigen::VectorXd y = z.col(j).tail(t_len - 1);
    const Eigen::VectorXd b = x.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd e = y - x * b;
    const double s2 = e.squaredNorm() / static_cast<double>(t_len - 3);
    if (!std::isfinite(s2) || !(s2 > 0.0))
      throw DataError("variable " + std::to_string(j + 1) + ": constant series, AR(1) variance is " +
                      std::to_string(s2));
    out[j] = s2;
  }
  return out;
}

NiwPrior build_minnesota_prior(const VarData& data, double lambda1, double lambda2,
                               const std::vector<bool>& persistent, std::string* warning) {
  const Index n = data.n(), p = data.p, m = data.m();
  if (static_cast<Index>(persistent.size()) != n)
    throw std::invalid_argument("build_minnesota_prior: need one persistence flag per variable");
  if (!(lambda1 > 0.0)) throw std::invalid_argument("build_minnesota_prior: lambda1 must be positive");
  if (warning) {
    warning->clear();
    if (data.t_eff() <= n * p + 1) {
      std::ostringstream w;
      w << "only " << data.t_eff() << " usable observations for " << m << " coefficients per equation";
      *warning = w.str();
    }
  }

  NiwPrior prior;
  prior.lambda1 = lambda1;
  prior.lambda2 = lambda2;
  prior.sigma = ar1_residual_variances(data.z);
  prior.Psi = Eigen::MatrixXd::Zero(m, n);
  for (Index i = 0; i < n; ++i)
    if (persistent[static_cast<std::size_t>(i)]) prior.Psi(1 + i, i) = 1.0;
  prior.Gamma.resize(m);
  prior.Gamma[0] = kInterceptPriorVariance;
  for (Index l = 1; l <= p; ++l)
    for (Index j = 0; j < n; ++j)
      prior.Gamma[1 + (l - 1) * n + j] =
          lambda1 * lambda1 / (prior.sigma[j] * std::pow(static_cast<double>(l), lambda2));
  prior.nu = static_cast<double>(n + 2);
  prior.Phi = prior.sigma.asDiagonal();
  return prior;
}

NiwPosterior posterior_moments(const NiwPrior& prior, const VarData& data) {
  const Index m = prior.Psi.rows(), n = prior.Psi.cols();
  if (data.X.cols() != m || data.Y.cols() != n)
    throw std::invalid_argument("posterior_moments: prior and data dimensions differ");
  if ((prior.Gamma.array() <= 0.0).any())
    throw std::invalid_argument("posterior_moments: Gamma must be positive");

  const Eigen::VectorXd gamma_inv = prior.Gamma.cwiseInverse();
  Eigen::MatrixXd precision = data.X.transpose() * data.X;
  precision.diagonal() += gamma_inv;

  NiwPosterior post;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) throw NumericalError("posterior precision is not positive definite");
  post.Gamma_bar = symmetrize(llt.solve(Eigen::MatrixXd::Identity(m, m)));
  const Eigen::MatrixXd rhs = gamma_inv.asDiagonal() * prior.Psi + data.X.transpose() * data.Y;
  post.Psi_bar = llt.solve(rhs);
  post.nu_bar = prior.nu + static_cast<double>(data.t_eff());

  // Phi + Y'Y + Psi' G^-1 Psi - Psi_bar' G_bar^-1 Psi_bar, rearranged as a sum
  // of two PSD terms so it cannot lose definiteness to cancellation.
  const Eigen::MatrixXd resid = data.Y - data.X * post.Psi_bar;
  const Eigen::MatrixXd shift = post.Psi_bar - prior.Psi;
  post.Phi_bar = symmetrize(prior.Phi + resid.transpose() * resid +
                            shift.transpose() * gamma_inv.asDiagonal() * shift);
  Eigen::LLT<Eigen::MatrixXd> check(post.Phi_bar);
  if (check.info() != Eigen::Success) throw NumericalError("posterior scale matrix is indefinite");
  return post;
}

std::vector<PosteriorDraw> sample_posterior(const NiwPosterior& post, Index n_draws,
                                            std::uint64_t seed, unsigned threads) {
  if (n_draws < 1) throw std::invalid_argument("sample_posterior: need at least one draw");
  const Index n = post.Phi_bar.rows(), m = post.Gamma_bar.rows();
  if (!(post.nu_bar > static_cast<double>(n - 1)))
    throw std::invalid_argument("sample_posterior: nu_bar too small for Inverse-Wishart");
  const Eigen::MatrixXd l_phi = lower_cholesky(post.Phi_bar, "Phi_bar");
  const Eigen::MatrixXd l_gamma = lower_cholesky(post.Gamma_bar, "Gamma_bar");

  std::vector<PosteriorDraw> draws(static_cast<std::size_t>(n_draws));
  const Index n_chunks = (n_draws + kDrawChunk - 1) / kDrawChunk;
  parallel_for(
      static_cast<std::size_t>(n_chunks),
      [&](std::size_t c) {
        std::mt19937_64 rng(derive_seed(seed, c));
        std::normal_distribution<double> normal(0.0, 1.0);
        const Index begin = static_cast<Index>(c) * kDrawChunk;
        const Index end = std::min(n_draws, begin + kDrawChunk);
        for (Index d = begin; d < end; ++d) {
          // Bartlett factor of a Wishart(nu_bar, I) draw
          Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
          for (Index i = 0; i < n; ++i) {
            std::chi_squared_distribution<double> chi2(post.nu_bar - static_cast<double>(i));
            a(i, i) = std::sqrt(chi2(rng));
            for (Index k = 0; k < i; ++k) a(i, k) = normal(rng);
          }
          // Omega = L A'^-1 A^-1 L'
          const Eigen::MatrixXd ct = a.triangularView<Eigen::Lower>().solve(l_phi.transpose());
          PosteriorDraw& out = draws[static_cast<std::size_t>(d)];
          out.Omega = symmetrize(ct.transpose() * ct);
          out.A0inv = lower_cholesky(out.Omega, "Omega draw");

          Eigen::MatrixXd g(m, n);
          for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < m; ++i) g(i, j) = normal(rng);
          out.Pi = (post.Psi_bar + l_gamma * g * out.A0inv.transpose()).transpose();
        }
      },
      threads);
  return draws;
}

Eigen::MatrixXd companion_matrix(const PosteriorDraw& draw) {
  const Index n = draw.n(), p = draw.p();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n * p, n * p);
  c.topRows(n) = draw.Pi.rightCols(n * p);
  if (p > 1) c.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  return c;
}

bool is_explosive(const PosteriorDraw& draw) { return spectral_radius(companion_matrix(draw)) >= 1.0; }

Eigen::MatrixXd structural_irf(const PosteriorDraw& draw, Index shock, double size_sd, Index h_max) {
  const Index n = draw.n(), p = draw.p();
  if (shock < 0 || shock >= n)
    throw std::invalid_argument("structural_irf: shock index " + std::to_string(shock) +
                                " out of range");
  if (h_max < 0) throw std::invalid_argument("structural_irf: negative horizon");
  std::vector<Eigen::MatrixXd> lags;
  for (Index l = 1; l <= p; ++l) lags.push_back(draw.lag(l));

  Eigen::MatrixXd out(n, h_max + 1);
  out.col(0) = size_sd * draw.A0inv.col(shock);
  for (Index h = 1; h <= h_max; ++h) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (Index l = 1; l <= std::min(h, p); ++l) r += lags[static_cast<std::size_t>(l - 1)] * out.col(h - l);
    out.col(h) = r;
  }
  return out;
}

Eigen::VectorXd unconditional_mean(const PosteriorDraw& draw) {
  const double rho = spectral_radius(companion_matrix(draw));
  if (!(rho < 1.0)) throw NoSteadyStateError("companion spectral radius " + std::to_string(rho));
  const Index n = draw.n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (Index l = 1; l <= draw.p(); ++l) a -= draw.lag(l);
  return a.partialPivLu().solve(draw.intercept());
}

Eigen::MatrixXd ols_coefficients(const VarData& data) {
  return data.X.colPivHouseholderQr().solve(data.Y);
}

}  // namespace fsvar
