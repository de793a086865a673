// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: fsvar_acceptance [path/to/fsvar] [--quick] [--only N]
#include "fsvar/bvar.hpp"
#include "fsvar/firf.hpp"
#include "fsvar/flp.hpp"
#include "fsvar/fpca.hpp"
#include "fsvar/io.hpp"
#include "fsvar/lqd_transform.hpp"
#include "fsvar/numeric.hpp"
#include "fsvar/simlab.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fsvar;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

bool g_quick = false;
std::string g_cli;

// 1. LQD round trip on random Beta and Gamma densities over [0, 6].
Outcome lqd_round_trip() {
  const Support s{0.0, 6.0};
  const Index n = 1000;
  std::mt19937_64 rng(42);
  // shapes >= 2 keep the density continuous with finite slope at the boundary
  std::uniform_real_distribution<double> shape(2.0, 6.0), scale(0.4, 1.5);
  std::vector<DensityCurve> ps;
  for (int r = 0; r < 50; ++r) {
    DensityCurve p;
    p.support = s;
    p.grid = uniform_grid(0.0, 6.0, n);
    p.values.resize(n);
    if (r % 2 == 0) {
      boost::math::beta_distribution<double> b(shape(rng), shape(rng));
      for (Index i = 0; i < n; ++i) p.values[i] = boost::math::pdf(b, p.grid[i] / 6.0) / 6.0;
    } else {
      boost::math::gamma_distribution<double> g(shape(rng), scale(rng));
      for (Index i = 0; i < n; ++i) p.values[i] = boost::math::pdf(g, p.grid[i]);
    }
    p.values /= trapezoid(p.grid, p.values);
    ps.push_back(std::move(p));
  }
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& p : ps) {
    const auto q = lqd_inverse(lqd_forward(p, n), s, n);
    worst = std::max(worst, integrated_squared_error(q, p));
  }
  const double sec = seconds_since(t0);
  return {worst < 1e-5 && sec < 1.0, "worst MISE " + fmt(worst) + ", " + fmt(sec, 3) + " s for 50 curves"};
}

// 2. Every reconstructed density of a full DGP1 run is admissible without rescaling.
Outcome constraint_enforcement() {
  const auto spec = make_dgp_spec(BasisKind::Lqd);
  const auto sim = simulate_dgp(spec, 2024);
  const auto est = estimate_lqd_panel(sim.micro, spec.n_grid);
  const auto fp = fit_fpca(est.lqd, 7);
  Eigen::MatrixXd z(sim.z.rows(), 2 + 7);
  z << sim.y(), fp.scores;
  const auto data = make_var_data(z, 4);
  std::vector<bool> persistent(9, false);
  persistent[0] = persistent[1] = true;
  const auto post = posterior_moments(build_minnesota_prior(data, 0.2, 2.0, persistent), data);
  const auto draws = sample_posterior(post, 1000, 7);

  reset_renormalization_count();
  const auto dirf = functional_irf(draws, fp, {2, 0, 1.0}, {0, 4, 12, 24}, spec.support, 1000);
  double min_val = 0.0, mass_err = 0.0;
  Index checked = 0;
  for (Index d = 0; d < dirf.num_draws(); ++d) {
    const auto& b = dirf.baselines[static_cast<std::size_t>(d)];
    min_val = std::min(min_val, b.values.minCoeff());
    mass_err = std::max(mass_err, std::abs(trapezoid(b.grid, b.values) - 1.0));
    for (Index h = 0; h < 4; ++h) {
      const auto p = dirf.shocked(d, h);
      min_val = std::min(min_val, p.values.minCoeff());
      mass_err = std::max(mass_err, std::abs(trapezoid(p.grid, p.values) - 1.0));
      ++checked;
    }
  }
  const auto calls = renormalization_count();
  const bool ok = min_val >= 0.0 && mass_err <= 1e-6 && calls == 0 && checked > 0;
  return {ok, std::to_string(checked) + " shocked densities (" + std::to_string(dirf.dropped) +
                  " draws dropped), min " + fmt(min_val) + ", max |mass-1| " + fmt(mass_err) +
                  ", renormalize calls " + std::to_string(calls)};
}

// 3. Conjugate posterior against OLS and the Inverse-Wishart mean.
Outcome posterior_correctness() {
  const auto t0 = Clock::now();
  const auto spec = make_dgp_spec(BasisKind::Lqd);
  const auto data = make_var_data(simulate_dgp(spec, 11).z, 4);
  NiwPrior flat;
  flat.Psi = Eigen::MatrixXd::Zero(data.m(), data.n());
  flat.Gamma = Eigen::VectorXd::Constant(data.m(), 1e10);
  flat.nu = static_cast<double>(data.n() + 2);
  flat.Phi = ar1_residual_variances(data.z).asDiagonal();
  const auto post = posterior_moments(flat, data);
  const Eigen::MatrixXd ols = data.X.colPivHouseholderQr().solve(data.Y);
  const double rel = (post.Psi_bar - ols).norm() / ols.norm();
  const bool nu_ok = post.nu_bar == flat.nu + static_cast<double>(data.t_eff());

  const auto draws = sample_posterior(post, 50000, 3);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(data.n(), data.n());
  for (const auto& d : draws) mean += d.Omega;
  mean /= static_cast<double>(draws.size());
  const Eigen::MatrixXd expected = post.Phi_bar / (post.nu_bar - static_cast<double>(data.n()) - 1.0);
  const double iw = (mean - expected).norm() / expected.norm();
  const double sec = seconds_since(t0);
  const bool ok = rel < 1e-6 && nu_ok && iw < 0.02 && sec < 30.0;
  return {ok, "Psi_bar vs OLS rel " + fmt(rel) + ", nu_bar " + fmt(post.nu_bar, 6) +
                  (nu_ok ? " exact" : " WRONG") + ", IW mean rel " + fmt(iw) + ", " + fmt(sec, 3) + " s"};
}

// 4. MISE ordering identity < LQD < log for K = 2..5 on both designs.
Outcome mise_ordering() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (auto kind : {BasisKind::Lqd, BasisKind::LogDensity}) {
    MiseConfig cfg;
    cfg.n_reps = g_quick ? 20 : 100;
    const auto r = mise_cv_study(make_dgp_spec(kind), cfg);
    // rows follow r.transforms: identity, log, lqd
    const Index id = 0, lg = 1, lq = 2;
    std::cout << "  [4] " << to_string(kind) << " ratio (identity/log/lqd by K=1..5):\n";
    for (Index t = 0; t < 3; ++t) {
      std::cout << "      " << std::setw(8) << to_string(r.transforms[static_cast<std::size_t>(t)]);
      for (Index k = 0; k < r.ratio.cols(); ++k) std::cout << " " << std::setw(9) << fmt(r.ratio(t, k));
      std::cout << "\n";
    }
    ok = ok && r.ratio(id, 0) == 1.0;
    for (Index k = 1; k <= 4; ++k) {
      const bool cell = r.mise(id, k) < r.mise(lq, k) && r.mise(lq, k) < r.mise(lg, k);
      if (!cell) detail += " " + to_string(kind) + " K=" + std::to_string(k + 1) + " out of order;";
      ok = ok && cell;
    }
  }
  const double sec = seconds_since(t0);
  return {ok, std::string(g_quick ? "20" : "100") + " reps," + (detail.empty() ? " ordering holds" : detail) +
                  " " + fmt(sec, 4) + " s"};
}

// 5. Monte Carlo correlation between median and true functional IRFs, DGP1.
Outcome mc_correlation() {
  const auto t0 = Clock::now();
  McConfig cfg;
  cfg.k_list = {1, 3, 7, 15};
  cfg.horizons = {0, 4, 12};
  cfg.n_reps = g_quick ? 3 : 20;
  const auto r = mc_correlation_study(make_dgp_spec(BasisKind::Lqd), cfg);
  auto avg = [&](const std::string& k) {
    double s = 0.0;
    for (Index shock : cfg.shocks)
      for (Index h : cfg.horizons) s += r.corr(shock, h, k);
    return s / static_cast<double>(cfg.shocks.size() * cfg.horizons.size());
  };
  std::cout << "  [5] mean correlation by shock and horizon:\n";
  for (Index shock : cfg.shocks)
    for (Index h : cfg.horizons) {
      std::cout << "      shock " << shock + 1 << " h=" << std::setw(2) << h;
      for (Index k : cfg.k_list) std::cout << "  K=" << k << " " << fmt(r.corr(shock, h, std::to_string(k)));
      std::cout << "\n";
    }
  const double c1 = avg("1"), c3 = avg("3"), c7 = avg("7"), c15 = avg("15");
  const bool ok = c3 - c1 > 0.05 && c7 >= 0.85 && std::abs(c7 - c15) < 0.05;
  return {ok, std::to_string(cfg.n_reps) + " reps, averaged over shocks and h in {0,4,12}: K1 " + fmt(c1) +
                  ", K3 " + fmt(c3) + ", K7 " + fmt(c7) + ", K15 " + fmt(c15) + ", " + fmt(seconds_since(t0), 4) +
                  " s"};
}

// 6. Local projections recover the VAR responses and widen at long horizons.
Outcome lp_var_equivalence() {
  const auto spec = make_dgp_spec(BasisKind::Lqd);
  const Index t_len = 5000, burn = 500, n = 5, p = spec.p();
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(t_len + burn, n);
  for (Index t = p; t < t_len + burn; ++t) {
    Eigen::VectorXd e(n);
    for (Index i = 0; i < n; ++i) e[i] = nd(rng);
    Eigen::VectorXd v = spec.truth.intercept() + spec.truth.A0inv * e;
    for (Index l = 1; l <= p; ++l) v += spec.truth.lag(l) * z.row(t - l).transpose();
    z.row(t) = v.transpose();
  }
  z = z.bottomRows(t_len).eval();

  const FlpSpec fs{0, {2, 3, 4}, p};
  std::vector<FlpFit> fits;
  for (Index h = 0; h <= 24; ++h) fits.push_back(flp_fit(z, fs, h));
  const Eigen::MatrixXd lp = flp_score_irf(fits);
  const Eigen::MatrixXd truth = structural_irf(spec.truth, 0, 1.0, 24).bottomRows(3);
  // the whole response path over h = 0..4 is compared; per-horizon errors are reported
  const double path_rel = (lp.leftCols(5) - truth.leftCols(5)).norm() / truth.leftCols(5).norm();
  std::string per_h;
  for (Index h = 0; h <= 4; ++h)
    per_h += " " + fmt((lp.col(h) - truth.col(h)).norm() / truth.col(h).norm(), 3);

  FpcaModel model;
  model.mean_curve = LqdCurve{spec.basis.grid, spec.basis.mean, spec.support.upper};
  model.basis = spec.basis.basis;
  std::vector<FlpFit> pick{fits[0], fits[1], fits[24]};
  // keep the impulse scale of the h = 0 fit
  const auto irf = flp_functional_irf(pick, model, spec.support, 1.0, 400, 5, spec.n_grid, 0);
  auto width = [&](Index hi) {
    const auto b = pointwise_band(deltas_at(irf.sims, hi), kSimulationBand);
    return trapezoid(irf.sims.grid, (b.upper - b.lower).eval());
  };
  const double w1 = width(1), w24 = width(2);
  const bool ok = path_rel < 0.10 && w24 > w1;
  return {ok, "relative error of the score IRF path h=0..4 " + fmt(path_rel, 3) + " (per horizon:" + per_h +
                  "); 90% band area h=1 " + fmt(w1) + ", h=24 " + fmt(w24)};
}

// 7. Gini coefficient against closed forms and a sampling oracle.
Outcome gini_correctness() {
  auto curve = [](double lo, double hi, Index n, const std::function<double(double)>& f) {
    DensityCurve p;
    p.support = {lo, hi};
    p.grid = uniform_grid(lo, hi, n);
    p.values.resize(n);
    for (Index i = 0; i < n; ++i) p.values[i] = f(p.grid[i]);
    p.values /= trapezoid(p.grid, p.values);
    return p;
  };
  const double g1 = gini(curve(0.0, 1.0, 1000, [](double) { return 1.0; }));
  const double g5 = gini(curve(0.0, 5.0, 1000, [](double) { return 1.0; }));

  const double upper = 6.0;
  boost::math::gamma_distribution<double> gd(2.0, 1.0);
  const double gg = gini(curve(0.0, upper, 1000, [&](double x) { return boost::math::pdf(gd, x); }));
  std::mt19937_64 rng(99);
  std::gamma_distribution<double> sampler(2.0, 1.0);
  std::vector<double> xs;
  xs.reserve(1000000);
  while (xs.size() < 1000000) {
    const double x = sampler(rng);
    if (x <= upper) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  double sum = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum += xs[i];
    weighted += static_cast<double>(i + 1) * xs[i];
  }
  const double n = static_cast<double>(xs.size());
  const double empirical = 2.0 * weighted / (n * sum) - (n + 1.0) / n;
  const double third = 1.0 / 3.0;
  const bool ok = std::abs(g1 - third) < 1e-3 && std::abs(g5 - third) < 1e-3 && std::abs(gg - empirical) < 1e-3;
  return {ok, "uniform[0,1] " + fmt(g1, 6) + ", uniform[0,5] " + fmt(g5, 6) + ", Gamma(2,1) on [0,6] " +
                  fmt(gg, 6) + " vs sample " + fmt(empirical, 6)};
}

// 8. Two runs of `fsvar mc` with one config give identical tables.
Outcome determinism() {
  if (g_cli.empty() || !fs::exists(g_cli)) return {false, "fsvar executable not found: '" + g_cli + "'"};
  const fs::path dir = fs::temp_directory_path() / "fsvar_acceptance_mc";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_text_file(dir / "mc.cfg",
                  "t_len = 120\nn_micro = 1500\nburn_in = 100\nreps = 2\nk_list = 1,3\nn_draws = 50\n"
                  "horizons = 0,4\nseed = 5\nthreads = 4\n");
  for (const char* run : {"a", "b"}) {
    const std::string cmd = "\"" + g_cli + "\" mc -c \"" + (dir / "mc.cfg").string() + "\" --set output_dir=\"" +
                            (dir / run).string() + "\" > \"" + (dir / (std::string(run) + ".log")).string() + "\" 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "fsvar mc failed, see " + (dir / run).string() + ".log"};
  }
  bool same = true;
  std::string detail;
  for (const char* f : {"mc_table.csv", "mc_reps.csv"}) {
    const bool eq = read_text_file(dir / "a" / f) == read_text_file(dir / "b" / f);
    detail += std::string(" ") + f + (eq ? " identical" : " DIFFERENT") + ";";
    same = same && eq;
  }
  return {same, "two runs:" + detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--quick")
      g_quick = true;
    else if (a == "--only" && i + 1 < argc)
      only = argv[++i];
    else
      g_cli = a;
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 LQD round trip", lqd_round_trip},
      {"2 constraint enforcement", constraint_enforcement},
      {"3 conjugate posterior", posterior_correctness},
      {"4 MISE ordering", mise_ordering},
      {"5 MC correlation", mc_correlation},
      {"6 LP/VAR equivalence", lp_var_equivalence},
      {"7 Gini", gini_correctness},
      {"8 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && name.substr(0, name.find(' ')) != only) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
