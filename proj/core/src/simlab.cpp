#include "fsvar/simlab.hpp"

#include "fsvar/density_kernel.hpp"
#include "fsvar/errors.hpp"
#include "fsvar/lqd_transform.hpp"
#include "fsvar/numeric.hpp"
#include "fsvar/parallel.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fsvar {

namespace {
constexpr Index kMixtureNodes = 256;
constexpr Index kOmegaDraws = 100;
// Omega is the average of kOmegaDraws outer products, 1/100 of the plain sum
// R R'. Scaling the unit-norm components by sqrt(100) gives exactly the
// densities that the summed covariance would give with unit-norm components.
const double kBasisNorm = std::sqrt(static_cast<double>(kOmegaDraws));

// uniform(0, 3) excluding 0 so Beta parameters stay positive
double positive_uniform(std::mt19937_64& rng, double hi) {
  std::uniform_real_distribution<double> u(0.0, hi);
  double v = 0.0;
  while (v <= 0.0) v = u(rng);
  return v;
}
}  // namespace

std::string to_string(BasisKind k) { return k == BasisKind::Lqd ? "lqd" : "logdensity"; }

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "lqd" || s == "dgp1") return BasisKind::Lqd;
  if (s == "logdensity" || s == "dgp2") return BasisKind::LogDensity;
  throw ConfigError("unknown basis kind '" + s + "' (expected lqd or logdensity)");
}

std::string to_string(Transform t) {
  switch (t) {
    case Transform::Identity: return "identity";
    case Transform::Log: return "log";
    case Transform::Lqd: return "lqd";
  }
  return "?";
}

DensityCurve gamma_mixture_density(double a, double b, const Support& support, Index n_grid) {
  // midpoint rule in the Beta quantile scale: w_i = F^{-1}((i + 1/2) / M)
  std::vector<double> shape(kMixtureNodes), log_norm(kMixtureNodes);
  for (Index i = 0; i < kMixtureNodes; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(kMixtureNodes);
    const double w = boost::math::ibeta_inv(a, b, u);
    shape[static_cast<std::size_t>(i)] = 1.0 + 2.0 * w;
    log_norm[static_cast<std::size_t>(i)] = std::lgamma(1.0 + 2.0 * w);
  }
  DensityCurve p;
  p.support = support;
  p.grid = uniform_grid(support.lower, support.upper, n_grid);
  p.values.resize(n_grid);
  for (Index j = 0; j < n_grid; ++j) {
    const double x = p.grid[j];
    double s = 0.0;
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (x > 0.0)
        s += std::exp((shape[i] - 1.0) * std::log(x) - x - log_norm[i]);
      else if (shape[i] == 1.0)
        s += 1.0;
    }
    p.values[j] = std::max(s / static_cast<double>(kMixtureNodes), 1e-12);
  }
  renormalize(p);
  return p;
}

GammaMixtureBasis build_gamma_mixture_basis(BasisKind kind, const Support& support,
                                            Index n_realizations, Index k_true, std::uint64_t seed,
                                            Index n_grid) {
  if (n_realizations < k_true || k_true < 1)
    throw std::invalid_argument("build_gamma_mixture_basis: need at least K_true realizations");
  std::mt19937_64 rng(seed);
  GammaMixtureBasis out;
  out.kind = kind;
  out.support = support;
  for (Index r = 0; r < n_realizations; ++r) {
    const double a = positive_uniform(rng, 3.0);
    const double b = positive_uniform(rng, 3.0);
    out.realizations.push_back(gamma_mixture_density(a, b, support, n_grid));
  }

  Eigen::MatrixXd rows(n_realizations, n_grid);
  if (kind == BasisKind::Lqd) {
    for (Index r = 0; r < n_realizations; ++r) {
      const LqdCurve f = lqd_forward(out.realizations[static_cast<std::size_t>(r)], n_grid);
      rows.row(r) = f.values.transpose();
      if (r == 0) out.grid = f.grid01;
    }
  } else {
    for (Index r = 0; r < n_realizations; ++r)
      rows.row(r) = out.realizations[static_cast<std::size_t>(r)].values.array().log().transpose();
    out.grid = out.realizations.front().grid;
  }
  const FpcaModel m = fit_fpca(make_panel_from_matrix(rows, out.grid, support.upper), k_true);
  out.mean = m.mean_curve.values;
  out.basis = m.basis * kBasisNorm;
  return out;
}

Eigen::MatrixXd design_var_coefficients() {
  Eigen::MatrixXd p1(5, 5), p2(5, 5);
  p1 << 0.85, -0.15, 0.15, 0.15, -0.25,
       -0.2, 0.85, -0.15, -0.25, -0.2,
        0.15, -0.15, 0.85, -0.15, 0.0,
        0.1, 0.15, -0.2, 0.85, -0.2,
       -0.25, 0.15, 0.15, 0.15, 0.85;
  p2 << -0.3, 0.1, 0.15, -0.15, -0.1,
        -0.1, -0.3, 0.1, 0.15, 0.15,
        -0.05, 0.1, -0.3, 0.05, -0.1,
         0.15, -0.1, -0.05, -0.3, -0.05,
         0.15, -0.15, 0.1, -0.1, -0.3;
  Eigen::MatrixXd pi(5, 21);
  pi.col(0).setZero();
  pi.block(0, 1, 5, 5) = p1;
  pi.block(0, 6, 5, 5) = p2;
  pi.block(0, 11, 5, 5) = 0.15 * Eigen::MatrixXd::Identity(5, 5);
  pi.block(0, 16, 5, 5) = 0.05 * Eigen::MatrixXd::Identity(5, 5);
  return pi;
}

Eigen::MatrixXd design_var_covariance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(5, 5);
  for (Index d = 0; d < kOmegaDraws; ++d) {
    Eigen::VectorXd r(5);
    for (Index i = 0; i < 5; ++i) {
      const double a = normal(rng);
      r[i] = 0.1 * a * normal(rng);
    }
    omega += r * r.transpose();
  }
  omega /= static_cast<double>(kOmegaDraws);
  return 0.5 * (omega + omega.transpose());
}

DgpSpec make_dgp_spec(BasisKind kind, std::uint64_t structure_seed) {
  DgpSpec spec;
  spec.kind = kind;
  spec.structure_seed = structure_seed;
  spec.truth.Pi = design_var_coefficients();
  spec.truth.Omega = design_var_covariance(derive_seed(structure_seed, 1));
  Eigen::LLT<Eigen::MatrixXd> llt(spec.truth.Omega);
  if (llt.info() != Eigen::Success) throw NumericalError("simulation covariance is not positive definite");
  spec.truth.A0inv = llt.matrixL();
  if (is_explosive(spec.truth)) throw NumericalError("simulation VAR is not stable");
  spec.basis = build_gamma_mixture_basis(kind, spec.support, 50, spec.k_true,
                                         derive_seed(structure_seed, 2), spec.n_grid);
  return spec;
}

DensityCurve density_from_scores(const DgpSpec& spec, const Eigen::VectorXd& alpha) {
  const Eigen::VectorXd curve = spec.basis.mean + spec.basis.basis * alpha;
  if (spec.kind == BasisKind::Lqd) {
    LqdCurve f;
    f.grid01 = spec.basis.grid;
    f.values = curve;
    f.support_sup = spec.support.upper;
    return lqd_inverse(f, spec.support, spec.n_grid);
  }
  DensityCurve p;
  p.support = spec.support;
  p.grid = spec.basis.grid;
  p.values = curve.array().min(kLqdExpCap).exp().matrix();
  renormalize(p);
  return p;
}

SimulatedData simulate_dgp(const DgpSpec& spec, std::uint64_t seed, unsigned threads) {
  const Index n = spec.truth.n(), p = spec.p();
  const Index total = spec.burn_in + spec.t_len;
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Eigen::MatrixXd> lags;
  for (Index l = 1; l <= p; ++l) lags.push_back(spec.truth.lag(l));
  Eigen::MatrixXd path = Eigen::MatrixXd::Zero(total + p, n);
  for (Index t = p; t < total + p; ++t) {
    Eigen::VectorXd e(n);
    for (Index i = 0; i < n; ++i) e[i] = normal(rng);
    Eigen::VectorXd zt = spec.truth.intercept() + spec.truth.A0inv * e;
    for (Index l = 1; l <= p; ++l) zt += lags[static_cast<std::size_t>(l - 1)] * path.row(t - l).transpose();
    path.row(t) = zt.transpose();
  }

  SimulatedData out;
  out.z = path.bottomRows(spec.t_len);
  out.densities.resize(static_cast<std::size_t>(spec.t_len));
  out.micro.support = spec.support;
  out.micro.periods.resize(static_cast<std::size_t>(spec.t_len));
  out.micro.samples.resize(static_cast<std::size_t>(spec.t_len));
  const std::uint64_t draw_seed = derive_seed(seed, 1);
  parallel_for(
      static_cast<std::size_t>(spec.t_len),
      [&](std::size_t t) {
        const Index ti = static_cast<Index>(t);
        out.densities[t] = density_from_scores(spec, out.z.row(ti).tail(spec.k_true).transpose());
        char label[16];
        std::snprintf(label, sizeof label, "t%05lld", static_cast<long long>(t + 1));
        out.micro.periods[t] = label;

        const DensityCurve& d = out.densities[t];
        Eigen::VectorXd cdf = cumulative_trapezoid(d.grid, d.values);
        cdf /= cdf[cdf.size() - 1];
        std::mt19937_64 local(derive_seed(draw_seed, t));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        auto& s = out.micro.samples[t];
        s.resize(static_cast<std::size_t>(spec.n_micro));
        for (auto& v : s) v = std::clamp(interp_linear(cdf, d.grid, unif(local)), spec.support.lower,
                                         spec.support.upper);
      },
      threads);
  return out;
}

DistributionalIrf true_functional_irf(const DgpSpec& spec, Index shock, double size_sd,
                                      const std::vector<Index>& horizons) {
  if (shock < 0 || shock >= spec.truth.n())
    throw std::invalid_argument("true_functional_irf: shock out of range");
  const Index h_max = *std::max_element(horizons.begin(), horizons.end());
  const Eigen::MatrixXd irf = structural_irf(spec.truth, shock, size_sd, h_max);
  const Eigen::VectorXd mu = unconditional_mean(spec.truth);
  const Eigen::VectorXd a_ss = mu.tail(spec.k_true);

  DistributionalIrf out;
  out.horizons = horizons;
  out.support = spec.support;
  out.grid = uniform_grid(spec.support.lower, spec.support.upper, spec.n_grid);
  out.kept_draws.push_back(0);
  out.baselines.push_back(density_from_scores(spec, a_ss));
  std::vector<Eigen::VectorXd> deltas;
  for (Index h : horizons) {
    const Eigen::VectorXd a = a_ss + irf.block(spec.n_v, h, spec.k_true, 1);
    deltas.push_back(density_from_scores(spec, a).values - out.baselines.front().values);
  }
  out.deltas.push_back(std::move(deltas));
  return out;
}

EstimatedPanel estimate_lqd_panel(const MicroPanel& micro, Index n_grid, unsigned threads) {
  micro.validate();
  EstimatedPanel out;
  out.densities = estimate_panel(micro, n_grid, threads);
  std::vector<LqdCurve> curves(out.densities.size());
  parallel_for(
      curves.size(), [&](std::size_t t) { curves[t] = lqd_forward(out.densities[t], n_grid); },
      threads);
  out.lqd = make_lqd_panel(std::move(curves), micro.periods);
  return out;
}

double McResult::corr(Index shock, Index horizon, const std::string& k) const {
  for (const auto& r : rows)
    if (r.shock == shock && r.horizon == horizon && r.k_label == k) return r.mean_corr;
  throw std::out_of_range("McResult: no row for shock " + std::to_string(shock) + ", h " +
                          std::to_string(horizon) + ", K " + k);
}

McResult mc_correlation_study(const DgpSpec& spec, const McConfig& cfg) {
  if (cfg.n_reps < 1) throw std::invalid_argument("mc_correlation_study: need at least one repetition");
  if (cfg.k_list.empty() && !cfg.include_scree)
    throw std::invalid_argument("mc_correlation_study: no K values");
  const Index n_shocks = static_cast<Index>(cfg.shocks.size());
  const Index n_h = static_cast<Index>(cfg.horizons.size());

  std::vector<std::string> labels;
  for (Index k : cfg.k_list) labels.push_back(std::to_string(k));
  if (cfg.include_scree) labels.push_back("scree");
  const Index n_k = static_cast<Index>(labels.size());

  std::vector<std::vector<Eigen::VectorXd>> truth(static_cast<std::size_t>(n_shocks));
  for (Index s = 0; s < n_shocks; ++s) {
    const auto t = true_functional_irf(spec, cfg.shocks[static_cast<std::size_t>(s)], 1.0, cfg.horizons);
    truth[static_cast<std::size_t>(s)] = t.deltas.front();
  }

  // corr[rep](shock, k, h) flattened
  std::vector<Eigen::VectorXd> corr(static_cast<std::size_t>(cfg.n_reps));
  std::vector<Index> dropped(static_cast<std::size_t>(cfg.n_reps), 0);
  const unsigned inner = 1;
  parallel_for(
      static_cast<std::size_t>(cfg.n_reps),
      [&](std::size_t rep) {
        const std::uint64_t rs = derive_seed(cfg.seed, rep);
        const SimulatedData data = simulate_dgp(spec, derive_seed(rs, 0), inner);
        const EstimatedPanel est = estimate_lqd_panel(data.micro, spec.n_grid, inner);

        std::vector<Index> ks(cfg.k_list);
        if (cfg.include_scree) ks.push_back(select_k_scree(est.lqd, cfg.scree_threshold));
        const Index k_top = *std::max_element(ks.begin(), ks.end());
        const FpcaModel full = fit_fpca(est.lqd, k_top);

        Eigen::VectorXd c(n_shocks * n_k * n_h);
        for (Index ki = 0; ki < n_k; ++ki) {
          const FpcaModel model = full.truncated(ks[static_cast<std::size_t>(ki)]);
          Eigen::MatrixXd z(data.z.rows(), spec.n_v + model.num_components());
          z << data.y(), model.scores;
          const VarData vd = make_var_data(z, cfg.p);
          std::vector<bool> persistent(static_cast<std::size_t>(z.cols()), false);
          for (Index i = 0; i < spec.n_v; ++i) persistent[static_cast<std::size_t>(i)] = true;
          const NiwPrior prior = build_minnesota_prior(vd, cfg.lambda1, cfg.lambda2, persistent);
          const NiwPosterior post = posterior_moments(prior, vd);
          const auto draws = sample_posterior(post, cfg.n_draws, derive_seed(rs, 10 + ki), inner);
          for (Index s = 0; s < n_shocks; ++s) {
            const ShockSpec sh{spec.n_v, cfg.shocks[static_cast<std::size_t>(s)], 1.0};
            const DistributionalIrf dirf =
                functional_irf(draws, model, sh, cfg.horizons, spec.support, spec.n_grid, inner);
            if (s == 0) dropped[rep] += dirf.dropped;
            for (Index h = 0; h < n_h; ++h) {
              const double r =
                  dirf.num_draws() > 0
                      ? pearson_correlation(median_delta(dirf, h),
                                            truth[static_cast<std::size_t>(s)][static_cast<std::size_t>(h)])
                      : std::numeric_limits<double>::quiet_NaN();
              c[(s * n_k + ki) * n_h + h] = r;
            }
          }
        }
        corr[rep] = std::move(c);
      },
      cfg.threads);

  McResult out;
  for (Index rep = 0; rep < cfg.n_reps; ++rep) out.dropped_draws += dropped[static_cast<std::size_t>(rep)];
  for (Index s = 0; s < n_shocks; ++s)
    for (Index ki = 0; ki < n_k; ++ki)
      for (Index h = 0; h < n_h; ++h) {
        McRow row;
        row.shock = cfg.shocks[static_cast<std::size_t>(s)];
        row.horizon = cfg.horizons[static_cast<std::size_t>(h)];
        row.k_label = labels[static_cast<std::size_t>(ki)];
        row.per_rep.resize(cfg.n_reps);
        for (Index rep = 0; rep < cfg.n_reps; ++rep)
          row.per_rep[rep] = corr[static_cast<std::size_t>(rep)][(s * n_k + ki) * n_h + h];
        row.mean_corr = row.per_rep.mean();
        out.rows.push_back(std::move(row));
      }
  return out;
}

namespace {
DensityCurve invert_transform(Transform tr, const Eigen::VectorXd& curve, const Eigen::VectorXd& grid01,
                              const DensityCurve& like) {
  switch (tr) {
    case Transform::Identity: {
      DensityCurve p = like;
      p.values = curve;
      return p;
    }
    case Transform::Log: {
      DensityCurve p = like;
      p.values = curve.array().min(kLqdExpCap).exp().matrix();
      renormalize(p);
      return p;
    }
    case Transform::Lqd: {
      LqdCurve f;
      f.grid01 = grid01;
      f.values = curve;
      f.support_sup = like.support.upper;
      return lqd_inverse(f, like.support, like.grid.size());
    }
  }
  throw std::logic_error("unknown transform");
}
}  // namespace

MiseResult mise_cv_on_densities(const std::vector<DensityCurve>& densities, const MiseConfig& cfg) {
  const Index t_len = static_cast<Index>(densities.size());
  if (t_len < 5) throw std::invalid_argument("mise_cv: need at least 5 densities");
  if (!(cfg.train_share > 0.0 && cfg.train_share < 1.0))
    throw std::invalid_argument("mise_cv: train share must lie in (0, 1)");
  const Index n_train = static_cast<Index>(std::llround(cfg.train_share * static_cast<double>(t_len)));
  if (n_train < cfg.k_max || n_train >= t_len)
    throw std::invalid_argument("mise_cv: split leaves too few curves");
  const Index n_grid = densities.front().grid.size();

  MiseResult out;
  const Index n_tr = static_cast<Index>(out.transforms.size());
  // transformed curves, one row per period
  std::vector<Eigen::MatrixXd> data(static_cast<std::size_t>(n_tr), Eigen::MatrixXd(t_len, n_grid));
  Eigen::VectorXd grid01;
  for (Index t = 0; t < t_len; ++t) {
    const auto& p = densities[static_cast<std::size_t>(t)];
    data[0].row(t) = p.values.transpose();
    data[1].row(t) = p.values.cwiseMax(1e-300).array().log().transpose();
    const LqdCurve f = lqd_forward(p, n_grid);
    data[2].row(t) = f.values.transpose();
    if (t == 0) grid01 = f.grid01;
  }
  const Eigen::VectorXd& xgrid = densities.front().grid;

  std::vector<Eigen::MatrixXd> per_rep(static_cast<std::size_t>(cfg.n_reps));
  parallel_for(
      static_cast<std::size_t>(cfg.n_reps),
      [&](std::size_t rep) {
        std::vector<Index> idx(static_cast<std::size_t>(t_len));
        std::iota(idx.begin(), idx.end(), 0);
        std::mt19937_64 rng(derive_seed(cfg.seed, rep));
        std::shuffle(idx.begin(), idx.end(), rng);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n_tr, cfg.k_max);
        for (Index tr = 0; tr < n_tr; ++tr) {
          const auto& rows = data[static_cast<std::size_t>(tr)];
          Eigen::MatrixXd train(n_train, n_grid);
          for (Index i = 0; i < n_train; ++i) train.row(i) = rows.row(idx[static_cast<std::size_t>(i)]);
          const Eigen::VectorXd& g = tr == 2 ? grid01 : xgrid;
          const FpcaModel m = fit_fpca(make_panel_from_matrix(train, g), cfg.k_max);
          for (Index i = n_train; i < t_len; ++i) {
            const Index t = idx[static_cast<std::size_t>(i)];
            const DensityCurve& truth = densities[static_cast<std::size_t>(t)];
            const Eigen::VectorXd dev = rows.row(t).transpose() - m.mean_curve.values;
            const Eigen::VectorXd a = m.basis.transpose() * dev;
            Eigen::VectorXd curve = m.mean_curve.values;
            for (Index k = 0; k < cfg.k_max; ++k) {
              curve += a[k] * m.basis.col(k);
              const DensityCurve ph = invert_transform(out.transforms[static_cast<std::size_t>(tr)], curve,
                                                       grid01, truth);
              acc(tr, k) += integrated_squared_error(ph, truth);
            }
          }
        }
        per_rep[rep] = acc / static_cast<double>(t_len - n_train);
      },
      cfg.threads);

  out.mise = Eigen::MatrixXd::Zero(n_tr, cfg.k_max);
  for (const auto& m : per_rep) out.mise += m;
  out.mise /= static_cast<double>(cfg.n_reps);
  out.ratio = out.mise / out.mise(0, 0);
  return out;
}

MiseResult mise_cv_study(const DgpSpec& spec, const MiseConfig& cfg) {
  const SimulatedData data = simulate_dgp(spec, derive_seed(cfg.seed, 0xC0FFEE), cfg.threads);
  const EstimatedPanel est = estimate_lqd_panel(data.micro, spec.n_grid, cfg.threads);
  return mise_cv_on_densities(est.densities, cfg);
}

}  // namespace fsvar
