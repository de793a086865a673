#include "fsvar/errors.hpp"
#include "fsvar/flp.hpp"
#include "fsvar/numeric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fsvar;

namespace {
// z = [x, a1, a2]: x is AR(1), scores respond to lagged x with known weights
Eigen::MatrixXd system(Index t_len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(t_len, 3);
  for (Index t = 1; t < t_len; ++t) {
    z(t, 0) = 0.5 * z(t - 1, 0) + nd(rng);
    z(t, 1) = 0.8 * z(t, 0) + 0.3 * z(t - 1, 1) + 0.2 * nd(rng);
    z(t, 2) = -0.5 * z(t, 0) + 0.2 * nd(rng);
  }
  return z;
}
}  // namespace

TEST(Flp, RegressorLayout) {
  const auto z = system(300, 1);
  FlpSpec spec{1, {2}, 2};
  const auto fit = flp_fit(z, spec, 0, {"x", "a1", "a2"});
  ASSERT_EQ(fit.regressors.size(), 1u + 1u + 1u + 6u);
  EXPECT_EQ(fit.regressors[0], "const");
  EXPECT_EQ(fit.shock_column, 2);
  EXPECT_EQ(fit.t_len, 298);
  EXPECT_EQ(fit.X(0, 1), z(2, 0));  // contemporaneous x precedes the impulse a1
  EXPECT_EQ(fit.X(0, 2), z(2, 1));
}

TEST(Flp, StaticProjectionMatchesOls) {
  const auto z = system(400, 2);
  FlpSpec spec{0, {1, 2}, 1};
  const Index h = 3;
  const auto fit = flp_fit(z, spec, h);
  const Index t_len = 400 - 1 - h;
  Eigen::MatrixXd x(t_len, 5);
  Eigen::MatrixXd y(t_len, 2);
  for (Index i = 0; i < t_len; ++i) {
    const Index t = 1 + i;
    x.row(i) << 1.0, z(t, 0), z(t - 1, 0), z(t - 1, 1), z(t - 1, 2);
    y.row(i) << z(t + h, 1), z(t + h, 2);
  }
  const Eigen::MatrixXd b = x.colPivHouseholderQr().solve(y);
  EXPECT_LT((fit.coefficients - b).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Flp, ImpactResponseRecovered) {
  const auto z = system(20000, 3);
  FlpSpec spec{0, {1, 2}, 1};
  std::vector<FlpFit> fits;
  for (Index h = 0; h <= 2; ++h) fits.push_back(flp_fit(z, spec, h));
  const auto irf = flp_score_irf(fits);
  // unit sd shock to x: a1 moves 0.8 on impact, then 0.8*0.5 + 0.3*0.8
  EXPECT_NEAR(irf(0, 0), 0.8, 0.02);
  EXPECT_NEAR(irf(1, 0), -0.5, 0.02);
  EXPECT_NEAR(irf(0, 1), 0.64, 0.03);
  EXPECT_NEAR(fits[0].shock_sd, 1.0, 0.02);
  EXPECT_DOUBLE_EQ(fits[0].shock_sd, fits[2].shock_sd);
}

TEST(Flp, HacMatchesHandComputedBartlett) {
  const auto z = system(120, 4);
  FlpSpec spec{0, {1, 2}, 1};
  const auto fit = flp_fit(z, spec, 2, {}, 3);
  const Index t_len = fit.X.rows(), k = fit.X.cols();
  const Eigen::MatrixXd xtx_inv = (fit.X.transpose() * fit.X).inverse();
  // Driscoll-Kraay: moment vector stacks both equations
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  auto g = [&](Index t) {
    Eigen::VectorXd v(2 * k);
    v << fit.X.row(t).transpose() * fit.residuals(t, 0), fit.X.row(t).transpose() * fit.residuals(t, 1);
    return v;
  };
  for (Index t = 0; t < t_len; ++t) s += g(t) * g(t).transpose();
  for (Index l = 1; l <= 3; ++l) {
    const double w = 1.0 - l / 4.0;
    for (Index t = l; t < t_len; ++t) {
      const Eigen::MatrixXd gg = g(t) * g(t - l).transpose();
      s += w * (gg + gg.transpose());
    }
  }
  Eigen::MatrixXd bread = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  bread.topLeftCorner(k, k) = xtx_inv;
  bread.bottomRightCorner(k, k) = xtx_inv;
  const Eigen::MatrixXd expected = bread * s * bread;
  EXPECT_LT((fit.hac_cov - expected).cwiseAbs().maxCoeff(), 1e-10 * expected.cwiseAbs().maxCoeff());

  const auto nw = hac_cov(fit, 3, HacKind::NeweyWest);
  EXPECT_LT((nw.topLeftCorner(k, k) - expected.topLeftCorner(k, k)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(nw.topRightCorner(k, k).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Flp, HacLongRunVarianceOfMa1) {
  // mean of an MA(1) e_t + 0.5 e_{t-1}: long-run variance 2.25
  const Index t_len = 40000;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd z(t_len, 2);
  double prev = nd(rng);
  for (Index t = 0; t < t_len; ++t) {
    const double e = nd(rng);
    z(t, 0) = nd(rng);
    z(t, 1) = e + 0.5 * prev;
    prev = e;
  }
  FlpSpec spec{0, {1}, 0};
  const auto fit = flp_fit(z, spec, 0, {}, 50);
  const double var_const = fit.hac_cov(0, 0) * static_cast<double>(fit.t_len);
  EXPECT_NEAR(var_const, 2.25, 0.15);
}

TEST(Flp, DefaultLagTruncation) {
  EXPECT_EQ(default_lag_truncation(100), 13);
  EXPECT_EQ(default_lag_truncation(500), 29);
}

TEST(Flp, RankDeficientDesign) {
  auto z = system(100, 6);
  z.col(2) = 2.0 * z.col(1);
  FlpSpec spec{0, {1}, 1};
  EXPECT_THROW(flp_fit(z, spec, 0), NumericalError);
}

TEST(Flp, TooShortSample) {
  const auto z = system(8, 7);
  FlpSpec spec{0, {1, 2}, 2};
  EXPECT_THROW(flp_fit(z, spec, 2), DataError);
}
