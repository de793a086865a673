#include "fsvar/bvar.hpp"
#include "fsvar/errors.hpp"
#include "fsvar/numeric.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fsvar;

namespace {
Eigen::MatrixXd simulate_var1(Index t_len, std::uint64_t seed) {
  Eigen::Matrix2d a;
  a << 0.5, 0.1, -0.2, 0.3;
  Eigen::Vector2d c(0.2, -0.1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd z(t_len, 2);
  Eigen::Vector2d prev = Eigen::Vector2d::Zero();
  for (Index t = 0; t < t_len; ++t) {
    Eigen::Vector2d e(nd(rng), 0.5 * nd(rng));
    prev = c + a * prev + e;
    z.row(t) = prev.transpose();
  }
  return z;
}

NiwPrior flat_prior(const VarData& d) {
  NiwPrior pr;
  pr.Psi = Eigen::MatrixXd::Zero(d.m(), d.n());
  pr.Gamma = Eigen::VectorXd::Constant(d.m(), 1e12);
  pr.nu = static_cast<double>(d.n() + 2);
  pr.Phi = Eigen::MatrixXd::Identity(d.n(), d.n());
  return pr;
}
}  // namespace

TEST(Bvar, DataLayout) {
  Eigen::MatrixXd z(5, 2);
  z << 1, 10, 2, 20, 3, 30, 4, 40, 5, 50;
  const auto d = make_var_data(z, 2);
  EXPECT_EQ(d.t_eff(), 3);
  EXPECT_EQ(d.m(), 5);
  // row for t = 3 (0-based 2): [1, z_2, z_1]
  Eigen::RowVectorXd x(5);
  x << 1, 2, 20, 1, 10;
  EXPECT_EQ(d.X.row(0), x);
  EXPECT_EQ(d.Y.row(0), z.row(2));
}

TEST(Bvar, FlatPriorGivesOls) {
  const auto d = make_var_data(simulate_var1(400, 2), 2);
  const auto post = posterior_moments(flat_prior(d), d);
  const Eigen::MatrixXd ols = (d.X.transpose() * d.X).ldlt().solve(d.X.transpose() * d.Y);
  EXPECT_LT((post.Psi_bar - ols).norm() / ols.norm(), 1e-6);
  EXPECT_LT((ols_coefficients(d) - ols).norm() / ols.norm(), 1e-10);
  EXPECT_DOUBLE_EQ(post.nu_bar, 4.0 + 398.0);
}

TEST(Bvar, PosteriorMatchesTextbookFormulas) {
  const auto d = make_var_data(simulate_var1(120, 4), 1);
  std::string warn;
  const auto pr = build_minnesota_prior(d, 0.2, 2.0, {true, false}, &warn);
  const auto post = posterior_moments(pr, d);
  const Eigen::MatrixXd gi = pr.Gamma.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd gbar = (gi + d.X.transpose() * d.X).inverse();
  const Eigen::MatrixXd psibar = gbar * (gi * pr.Psi + d.X.transpose() * d.Y);
  const Eigen::MatrixXd phibar = pr.Phi + d.Y.transpose() * d.Y + pr.Psi.transpose() * gi * pr.Psi -
                                 psibar.transpose() * gbar.inverse() * psibar;
  EXPECT_LT((post.Gamma_bar - gbar).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((post.Psi_bar - psibar).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((post.Phi_bar - phibar).cwiseAbs().maxCoeff() / phibar.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Bvar, MinnesotaPrior) {
  const auto z = simulate_var1(200, 6);
  const auto d = make_var_data(z, 2);
  const auto pr = build_minnesota_prior(d, 0.2, 2.0, {true, false});
  const auto s = ar1_residual_variances(z);
  EXPECT_EQ(pr.Psi(1, 0), 1.0);
  EXPECT_EQ(pr.Psi(2, 1), 0.0);
  EXPECT_EQ(pr.Psi.cwiseAbs().sum(), 1.0);
  EXPECT_DOUBLE_EQ(pr.Gamma[0], 1e3);
  EXPECT_NEAR(pr.Gamma[2], 0.04 / s[1], 1e-14);
  EXPECT_NEAR(pr.Gamma[3], 0.04 / (s[0] * 4.0), 1e-14);
  EXPECT_DOUBLE_EQ(pr.nu, 4.0);
  EXPECT_NEAR(pr.Phi(1, 1), s[1], 1e-14);
  EXPECT_EQ(pr.Phi(0, 1), 0.0);
}

TEST(Bvar, Ar1VarianceHandComputed) {
  Eigen::MatrixXd z(6, 1);
  z << 1, 3, 2, 5, 4, 6;
  // regress z_t on [1, z_{t-1}] over t = 2..6
  Eigen::MatrixXd x(5, 2);
  Eigen::VectorXd y(5);
  for (Index t = 1; t < 6; ++t) {
    x.row(t - 1) << 1.0, z(t - 1, 0);
    y[t - 1] = z(t, 0);
  }
  const Eigen::VectorXd b = x.colPivHouseholderQr().solve(y);
  const double ssr = (y - x * b).squaredNorm();
  EXPECT_NEAR(ar1_residual_variances(z)[0], ssr / 3.0, 1e-12);
  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(10, 1, 2.0);
  EXPECT_THROW(ar1_residual_variances(flat), DataError);
}

TEST(Bvar, InverseWishartMean) {
  NiwPosterior post;
  post.Gamma_bar = Eigen::MatrixXd::Identity(3, 3) * 0.01;
  post.Psi_bar = Eigen::MatrixXd::Zero(3, 2);
  post.nu_bar = 12.0;
  post.Phi_bar.resize(2, 2);
  post.Phi_bar << 2.0, 0.5, 0.5, 1.0;
  const auto draws = sample_posterior(post, 20000, 17, 1);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(2, 2);
  for (const auto& d : draws) mean += d.Omega / static_cast<double>(draws.size());
  const Eigen::MatrixXd expected = post.Phi_bar / (post.nu_bar - 2.0 - 1.0);
  EXPECT_LT((mean - expected).cwiseAbs().maxCoeff() / expected.cwiseAbs().maxCoeff(), 0.03);
  for (const auto& d : draws)
    ASSERT_LT((d.A0inv * d.A0inv.transpose() - d.Omega).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Bvar, SamplingDoesNotDependOnThreads) {
  const auto d = make_var_data(simulate_var1(100, 8), 1);
  const auto post = posterior_moments(build_minnesota_prior(d, 0.2, 2.0, {true, true}), d);
  const auto a = sample_posterior(post, 150, 99, 1);
  const auto b = sample_posterior(post, 150, 99, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].Pi, b[i].Pi);
    EXPECT_EQ(a[i].Omega, b[i].Omega);
  }
  const auto c = sample_posterior(post, 150, 100, 1);
  EXPECT_NE(a[0].Pi, c[0].Pi);
}

TEST(Bvar, StructuralIrfOfVar1) {
  PosteriorDraw d;
  d.Pi.resize(2, 3);
  d.Pi << 0.0, 0.5, 0.1, 0.0, -0.2, 0.3;
  d.Omega.resize(2, 2);
  d.Omega << 1.0, 0.3, 0.3, 0.5;
  d.A0inv = d.Omega.llt().matrixL();
  const auto irf = structural_irf(d, 1, 2.0, 3);
  Eigen::MatrixXd a = d.lag(1);
  Eigen::VectorXd v = 2.0 * d.A0inv.col(1);
  for (Index h = 0; h <= 3; ++h) {
    EXPECT_LT((irf.col(h) - v).cwiseAbs().maxCoeff(), 1e-12);
    v = a * v;
  }
  // the last variable's shock does not move earlier variables on impact
  EXPECT_EQ(irf(0, 0), 0.0);
}

TEST(Bvar, SteadyState) {
  PosteriorDraw d;
  d.Pi.resize(1, 3);
  d.Pi << 1.0, 0.5, 0.25;
  d.Omega = Eigen::MatrixXd::Identity(1, 1);
  d.A0inv = d.Omega;
  EXPECT_NEAR(unconditional_mean(d)[0], 4.0, 1e-12);
  EXPECT_FALSE(is_explosive(d));
  d.Pi << 1.0, 0.8, 0.3;
  EXPECT_TRUE(is_explosive(d));
  EXPECT_THROW(unconditional_mean(d), NoSteadyStateError);
}

TEST(Bvar, CompanionLayout) {
  PosteriorDraw d;
  d.Pi = Eigen::MatrixXd::Zero(2, 5);
  d.Pi.block(0, 1, 2, 2) << 1, 2, 3, 4;
  d.Pi.block(0, 3, 2, 2) << 5, 6, 7, 8;
  const auto c = companion_matrix(d);
  Eigen::MatrixXd expected(4, 4);
  expected << 1, 2, 5, 6, 3, 4, 7, 8, 1, 0, 0, 0, 0, 1, 0, 0;
  EXPECT_EQ(c, expected);
}
