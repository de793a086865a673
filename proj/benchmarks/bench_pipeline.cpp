#include "fsvar/bvar.hpp"
#include "fsvar/density_kernel.hpp"
#include "fsvar/firf.hpp"
#include "fsvar/fpca.hpp"
#include "fsvar/lqd_transform.hpp"
#include "fsvar/numeric.hpp"
#include "fsvar/simlab.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace fsvar;

namespace {
std::vector<double> gamma_sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> g(2.0, 0.8);
  std::vector<double> v;
  while (v.size() < n) {
    const double x = g(rng);
    if (x <= 6.0) v.push_back(x);
  }
  return v;
}

DensityCurve smooth_density(Index n) {
  DensityCurve p;
  p.support = {0.0, 6.0};
  p.grid = uniform_grid(0.0, 6.0, n);
  p.values = p.grid.array().square() * (6.0 - p.grid.array()) * (-0.5 * p.grid.array()).exp();
  p.values /= trapezoid(p.grid, p.values);
  return p;
}
}  // namespace

static void BM_ReflectedKde(benchmark::State& state) {
  const auto s = gamma_sample(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_density(s, {0.0, 6.0}, 1000));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReflectedKde)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

static void BM_LqdRoundTrip(benchmark::State& state) {
  const auto p = smooth_density(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lqd_inverse(lqd_forward(p, state.range(0)), p.support, state.range(0)));
}
BENCHMARK(BM_LqdRoundTrip)->Arg(500)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

static void BM_Fpca(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd rows(state.range(0), 1000);
  for (Index i = 0; i < rows.size(); ++i) rows.data()[i] = nd(rng);
  const auto panel = make_panel_from_matrix(rows, uniform_grid(0.0, 1.0, 1000));
  for (auto _ : state) benchmark::DoNotOptimize(fit_fpca(panel, 7));
}
BENCHMARK(BM_Fpca)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_PosteriorSampling(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd z(500, 9);
  for (Index i = 0; i < z.size(); ++i) z.data()[i] = nd(rng);
  const auto data = make_var_data(z, 4);
  const auto post = posterior_moments(build_minnesota_prior(data, 0.2, 2.0, std::vector<bool>(9, false)), data);
  for (auto _ : state) benchmark::DoNotOptimize(sample_posterior(post, state.range(0), 1, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PosteriorSampling)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_FunctionalIrf(benchmark::State& state) {
  const auto spec = make_dgp_spec(BasisKind::Lqd);
  FpcaModel model;
  model.mean_curve = LqdCurve{spec.basis.grid, spec.basis.mean, spec.support.upper};
  model.basis = spec.basis.basis;
  const std::vector<PosteriorDraw> draws(static_cast<std::size_t>(state.range(0)), spec.truth);
  for (auto _ : state)
    benchmark::DoNotOptimize(functional_irf(draws, model, {2, 0, 1.0}, {0, 4, 12, 24}, spec.support, 1000, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FunctionalIrf)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
