#include "commands.hpp"

#include "fsvar/bvar.hpp"
#include "fsvar/density_kernel.hpp"
#include "fsvar/errors.hpp"
#include "fsvar/firf.hpp"
#include "fsvar/flp.hpp"
#include "fsvar/fpca.hpp"
#include "fsvar/io.hpp"
#include "fsvar/lqd_transform.hpp"
#include "fsvar/numeric.hpp"
#include "fsvar/simlab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

namespace fsvar::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Collects written files so the manifest can list their hashes.
class OutputDir {
public:
  OutputDir(const RunConfig& cfg, std::string command)
      : dir_(cfg.output_dir), command_(std::move(command)), cfg_(cfg) {}

  void write(const std::string& name, const std::string& text) {
    write_text_file(dir_ / name, text);
    files_[name] = hex64(fnv1a64(text));
  }

  void finish(const json& extra = json::object()) {
    json m;
    m["command"] = command_;
    m["version"] = library_version();
    m["config_hash"] = cfg_.hash();
    m["seed"] = cfg_.seed;
    m["files"] = files_;
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    write_text_file(dir_ / "manifest.json", m.dump(2) + "\n");
  }

private:
  fs::path dir_;
  std::string command_;
  const RunConfig& cfg_;
  std::map<std::string, std::string> files_;
};

std::string level_tag(double level) {
  const double pct = 100.0 * level;
  if (std::abs(pct - std::round(pct)) < 1e-9) return std::to_string(static_cast<long long>(std::round(pct)));
  return format_double(pct);
}

std::string band_header(const std::vector<double>& levels) {
  std::string h = "estimate";
  for (double l : levels) h += ",lo_" + level_tag(l) + ",hi_" + level_tag(l);
  return h;
}

// One summary per column of `samples` (rows are draws): the estimate followed by
// the equal-tailed band limits at each level.
std::vector<std::string> summarize(const Eigen::MatrixXd& samples, const Eigen::VectorXd* point,
                                   const std::vector<double>& levels) {
  std::vector<Band> bands;
  for (double l : levels) bands.push_back(pointwise_band(samples, l));
  std::vector<std::string> out(static_cast<std::size_t>(samples.cols()));
  for (Index j = 0; j < samples.cols(); ++j) {
    std::string s = format_double(point ? (*point)[j] : bands.front().median[j]);
    for (const auto& b : bands) s += "," + format_double(b.lower[j]) + "," + format_double(b.upper[j]);
    out[static_cast<std::size_t>(j)] = std::move(s);
  }
  return out;
}

fs::path fit_dir(const RunConfig& cfg) { return cfg.fit_dir.empty() ? cfg.output_dir : cfg.fit_dir; }

std::string read_artifact(const fs::path& path) {
  if (!fs::exists(path))
    throw DataError("missing fitted artifact " + path.string() + " (run `fsvar fit` first)");
  return read_text_file(path);
}

DgpSpec dgp_from_config(const RunConfig& cfg) {
  DgpSpec spec = make_dgp_spec(basis_kind_from_string(cfg.dgp), cfg.structure_seed);
  spec.t_len = cfg.t_len;
  spec.n_micro = cfg.n_micro;
  spec.burn_in = cfg.burn_in;
  return spec;
}

std::string matrix_csv(const std::vector<std::string>& periods, const std::vector<std::string>& names,
                       const Eigen::MatrixXd& values) {
  MacroSeries m{periods, names, values};
  return macro_to_csv(m);
}

// Everything cmd_fit leaves behind that the response commands need.
struct FitArtifacts {
  json meta;
  std::vector<std::string> names;
  std::vector<std::string> periods;
  Eigen::MatrixXd z;
  Index score_offset = 0;
  Index n_scores = 0;
  Index shock = 0;
  Support support;
  Index n_grid = 0;
  FpcaModel model;
};

FitArtifacts load_fit(const RunConfig& cfg) {
  const fs::path dir = fit_dir(cfg);
  FitArtifacts a;
  try {
    a.meta = json::parse(read_artifact(dir / "fit.json"));
    a.names = a.meta.at("names").get<std::vector<std::string>>();
    a.score_offset = a.meta.at("score_offset").get<Index>();
    a.n_scores = a.meta.at("n_scores").get<Index>();
    a.shock = a.meta.at("shock_index").get<Index>();
    a.n_grid = a.meta.at("n_grid").get<Index>();
    if (a.n_scores > 0) {
      a.support.lower = a.meta.at("support").at(0).get<double>();
      a.support.upper = a.meta.at("support").at(1).get<double>();
    }
  } catch (const json::exception& e) {
    throw DataError("fit.json: " + std::string(e.what()));
  }
  read_artifact(dir / "z.csv");
  const MacroSeries z = read_macro_csv(dir / "z.csv");
  a.periods = z.periods;
  a.z = z.values;
  if (z.names != a.names) throw DataError("z.csv columns do not match fit.json");
  if (a.n_scores > 0) a.model = fpca_from_json(read_artifact(dir / "fpca.json"));
  return a;
}

void write_var_irf(OutputDir& out, const std::string& method, const std::vector<std::string>& names,
                   const std::vector<Index>& horizons, const std::vector<Eigen::MatrixXd>& per_var_samples,
                   const std::vector<Eigen::VectorXd>& points, const std::vector<double>& levels) {
  std::string csv = "method,variable,horizon," + band_header(levels) + "\n";
  for (std::size_t v = 0; v < names.size(); ++v) {
    const auto rows = summarize(per_var_samples[v], points.empty() ? nullptr : &points[v], levels);
    for (std::size_t h = 0; h < horizons.size(); ++h)
      csv += method + "," + names[v] + "," + std::to_string(horizons[h]) + "," + rows[h] + "\n";
  }
  out.write("var_irf.csv", csv);
}

// Delta curves, quantile paths, class shares and Gini paths. `samples` feeds the
// bands; `point` (F-LP) replaces the pointwise median as the estimate.
void write_distributional(OutputDir& out, const RunConfig& cfg, const std::string& method,
                          const DistributionalIrf& samples, const DistributionalIrf* point) {
  const auto& levels = cfg.bands;
  const Index n_h = static_cast<Index>(samples.horizons.size());
  const Eigen::VectorXd& x = samples.grid;

  std::string summary = "method,horizon,x," + band_header(levels) + "\n";
  for (Index hi = 0; hi < n_h; ++hi) {
    Eigen::VectorXd pt;
    if (point) pt = point->deltas.front()[static_cast<std::size_t>(hi)];
    const auto rows = summarize(deltas_at(samples, hi), point ? &pt : nullptr, levels);
    for (Index j = 0; j < x.size(); ++j)
      summary += method + "," + std::to_string(samples.horizons[static_cast<std::size_t>(hi)]) + "," +
                 format_double(x[j]) + "," + rows[static_cast<std::size_t>(j)] + "\n";
  }
  out.write("delta_summary.csv", summary);

  if (cfg.write_long) {
    std::string longf = "method,draw,horizon,x,value\n";
    for (Index d = 0; d < samples.num_draws(); ++d)
      for (Index hi = 0; hi < n_h; ++hi) {
        const auto& v = samples.deltas[static_cast<std::size_t>(d)][static_cast<std::size_t>(hi)];
        const std::string prefix = method + "," + std::to_string(samples.kept_draws[static_cast<std::size_t>(d)]) +
                                   "," + std::to_string(samples.horizons[static_cast<std::size_t>(hi)]) + ",";
        for (Index j = 0; j < x.size(); ++j) longf += prefix + format_double(x[j]) + "," + format_double(v[j]) + "\n";
      }
    out.write("delta_long.csv", longf);
  }

  auto horizon_rows = [&](const Eigen::MatrixXd& s, const Eigen::MatrixXd* p, const std::string& lead,
                          std::string& csv) {
    Eigen::VectorXd pv;
    if (p) pv = p->row(0).transpose();
    const auto rows = summarize(s, p ? &pv : nullptr, levels);
    for (Index hi = 0; hi < n_h; ++hi)
      csv += method + "," + lead + std::to_string(samples.horizons[static_cast<std::size_t>(hi)]) + "," +
             rows[static_cast<std::size_t>(hi)] + "\n";
  };

  std::string q = "method,quantile,horizon," + band_header(levels) + "\n";
  for (double qq : cfg.quantiles) {
    const Eigen::MatrixXd s = quantile_response(samples, qq);
    Eigen::MatrixXd p;
    if (point) p = quantile_response(*point, qq);
    horizon_rows(s, point ? &p : nullptr, format_double(qq) + ",", q);
  }
  out.write("quantiles.csv", q);

  const auto classes = class_share_response(samples, cfg.n_classes);
  std::vector<Eigen::MatrixXd> pclasses;
  if (point) pclasses = class_share_response(*point, cfg.n_classes);
  const double width = samples.support.width() / static_cast<double>(cfg.n_classes);
  std::string c = "method,class,lower,upper,horizon," + band_header(levels) + "\n";
  for (Index k = 0; k < cfg.n_classes; ++k) {
    Eigen::MatrixXd s(samples.num_draws(), n_h);
    for (Index d = 0; d < samples.num_draws(); ++d) s.row(d) = classes[static_cast<std::size_t>(d)].row(k);
    Eigen::MatrixXd p;
    if (point) p = pclasses.front().row(k);
    const double lo = samples.support.lower + width * static_cast<double>(k);
    horizon_rows(s, point ? &p : nullptr,
                 std::to_string(k + 1) + "," + format_double(lo) + "," + format_double(lo + width) + ",", c);
  }
  out.write("classes.csv", c);

  std::string g = "method,horizon," + band_header(levels) + "\n";
  const Eigen::MatrixXd gs = gini_response(samples, cfg.gini_percent);
  Eigen::MatrixXd gp;
  if (point) gp = gini_response(*point, cfg.gini_percent);
  horizon_rows(gs, point ? &gp : nullptr, "", g);
  out.write("gini.csv", g);
}

}  // namespace

RunConfig build_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg = path.empty() ? RunConfig{} : RunConfig::load(path);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + o + "'");
    cfg.set(o.substr(0, eq), o.substr(eq + 1), "--set");
  }
  cfg.validate();
  return cfg;
}

void cmd_simulate(const RunConfig& cfg) {
  const DgpSpec spec = dgp_from_config(cfg);
  const SimulatedData sim = simulate_dgp(spec, cfg.seed, cfg.threads);

  OutputDir out(cfg, "simulate");
  out.write("macro.csv", matrix_csv(sim.micro.periods, {"y1", "y2"}, sim.y()));
  out.write("micro.csv", micro_to_csv(sim.micro));

  json truth;
  truth["dgp"] = cfg.dgp;
  truth["structure_seed"] = cfg.structure_seed;
  truth["seed"] = cfg.seed;
  truth["support"] = {spec.support.lower, spec.support.upper};
  truth["Pi"] = json::parse(matrix_to_json(spec.truth.Pi));
  truth["Omega"] = json::parse(matrix_to_json(spec.truth.Omega));
  truth["alpha"] = json::parse(matrix_to_json(sim.alpha()));
  out.write("truth.json", truth.dump(1) + "\n");
  out.finish({{"dgp", cfg.dgp}, {"periods", spec.t_len}, {"n_micro", spec.n_micro}});
  std::cout << "simulated " << spec.t_len << " periods x " << spec.n_micro << " draws (" << cfg.dgp
            << ") into " << cfg.output_dir << "\n";
}

void cmd_fit(const RunConfig& cfg) {
  if (cfg.macro_csv.empty() && cfg.micro_csv.empty())
    throw ConfigError("fit needs macro_csv, micro_csv or both");

  MacroSeries macro;
  if (!cfg.macro_csv.empty()) macro = read_macro_csv(cfg.macro_csv);

  std::vector<std::string> periods = macro.periods;
  FpcaModel model;
  Index k = 0;
  Eigen::VectorXd cumulative;
  if (!cfg.micro_csv.empty()) {
    if (!cfg.support_set) throw ConfigError("micro_csv needs support_lower and support_upper");
    if (!fs::exists(cfg.micro_csv)) throw DataError("micro file not found: " + cfg.micro_csv);
    const MicroPanel micro = read_micro_csv(cfg.micro_csv, cfg.support, static_cast<std::size_t>(cfg.min_obs));
    if (!cfg.macro_csv.empty() && micro.periods != macro.periods) {
      std::size_t i = 0;
      while (i < micro.periods.size() && i < macro.periods.size() && micro.periods[i] == macro.periods[i]) ++i;
      throw DataError("macro and micro periods differ (first mismatch at position " + std::to_string(i + 1) + ")");
    }
    periods = micro.periods;
    const EstimatedPanel est = estimate_lqd_panel(micro, cfg.n_grid, cfg.threads);
    cumulative = cumulative_explained(est.lqd);
    k = cfg.k > 0 ? cfg.k : select_k_scree(est.lqd, cfg.scree_threshold);
    if (k > cumulative.size())
      throw ConfigError("k = " + std::to_string(k) + " exceeds the " + std::to_string(cumulative.size()) +
                        " available components");
    model = fit_fpca(est.lqd, k);
    std::cout << "K = " << k << (cfg.k > 0 ? "" : " (scree)") << ", explained shares:";
    for (Index i = 0; i < k; ++i) std::cout << " " << format_double(model.explained_shares[i]);
    std::cout << ", cumulative " << format_double(cumulative[k - 1]) << "\n";
  }

  // [macro without impulse, scores, impulse]
  std::vector<std::string> names;
  std::vector<Eigen::VectorXd> cols;
  Index impulse_col = -1;
  for (std::size_t j = 0; j < macro.names.size(); ++j) {
    if (!cfg.impulse.empty() && macro.names[j] == cfg.impulse) {
      impulse_col = static_cast<Index>(j);
      continue;
    }
    names.push_back(macro.names[j]);
    cols.push_back(macro.values.col(static_cast<Index>(j)));
  }
  if (!cfg.impulse.empty() && impulse_col < 0) throw ConfigError("impulse '" + cfg.impulse + "' is not a macro column");
  const Index score_offset = static_cast<Index>(names.size());
  for (Index i = 0; i < k; ++i) {
    names.push_back("alpha" + std::to_string(i + 1));
    cols.push_back(model.scores.col(i));
  }
  if (impulse_col >= 0) {
    names.push_back(cfg.impulse);
    cols.push_back(macro.values.col(impulse_col));
  }
  const Index n = static_cast<Index>(cols.size());
  Eigen::MatrixXd z(static_cast<Index>(periods.size()), n);
  for (Index j = 0; j < n; ++j) z.col(j) = cols[static_cast<std::size_t>(j)];

  const Index shock = impulse_col >= 0 ? n - 1 : (cfg.shock == 0 ? n - 1 : cfg.shock - 1);
  if (shock >= n) throw ConfigError("shock = " + std::to_string(cfg.shock) + " but z has " + std::to_string(n) + " variables");

  std::vector<bool> persistent(static_cast<std::size_t>(n), true);
  if (cfg.persistent.empty()) {
    for (Index i = 0; i < k; ++i) persistent[static_cast<std::size_t>(score_offset + i)] = false;
  } else {
    if (static_cast<Index>(cfg.persistent.size()) != n)
      throw ConfigError("persistent has " + std::to_string(cfg.persistent.size()) + " flags for " +
                        std::to_string(n) + " variables");
    for (Index i = 0; i < n; ++i) persistent[static_cast<std::size_t>(i)] = cfg.persistent[static_cast<std::size_t>(i)] != 0;
  }

  const VarData data = make_var_data(z, cfg.p, names);
  std::string warning;
  const NiwPrior prior = build_minnesota_prior(data, cfg.lambda1, cfg.lambda2, persistent, &warning);
  if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
  const NiwPosterior post = posterior_moments(prior, data);
  const auto draws = sample_posterior(post, cfg.n_draws, cfg.seed, cfg.threads);

  OutputDir out(cfg, "fit");
  out.write("z.csv", matrix_csv(periods, names, z));
  if (k > 0) out.write("fpca.json", fpca_to_json(model));
  out.write("posterior.json", posterior_to_json(post));
  out.write("draws.csv", draws_to_csv(draws));

  json meta;
  meta["names"] = names;
  meta["score_offset"] = score_offset;
  meta["n_scores"] = k;
  meta["shock_index"] = shock;
  meta["p"] = cfg.p;
  meta["n_grid"] = cfg.n_grid;
  meta["periods"] = periods.size();
  if (k > 0) {
    meta["support"] = {cfg.support.lower, cfg.support.upper};
    std::vector<double> shares(model.explained_shares.data(), model.explained_shares.data() + k);
    std::vector<double> cum(cumulative.data(), cumulative.data() + cumulative.size());
    meta["explained_shares"] = shares;
    meta["cumulative_explained"] = cum;
  }
  if (!warning.empty()) meta["warning"] = warning;
  out.write("fit.json", meta.dump(2) + "\n");
  out.finish({{"k", k}, {"n_draws", cfg.n_draws}});
  std::cout << "VAR(" << cfg.p << ") on " << n << " variables, " << cfg.n_draws << " posterior draws in "
            << cfg.output_dir << "\n";
}

void cmd_irf(const RunConfig& cfg) {
  if (cfg.method == "flp") {
    cmd_flp(cfg);
    return;
  }
  const FitArtifacts fit = load_fit(cfg);
  const auto draws = draws_from_csv(read_artifact(fit_dir(cfg) / "draws.csv"));
  if (draws.empty()) throw DataError("draws.csv holds no draws");
  const Index n = draws.front().n();
  if (n != static_cast<Index>(fit.names.size())) throw DataError("draws.csv does not match fit.json");

  OutputDir out(cfg, "irf");
  const Index h_max = *std::max_element(cfg.horizons.begin(), cfg.horizons.end());
  std::vector<Eigen::MatrixXd> per_var(static_cast<std::size_t>(n),
                                       Eigen::MatrixXd(static_cast<Index>(draws.size()), static_cast<Index>(cfg.horizons.size())));
  for (std::size_t d = 0; d < draws.size(); ++d) {
    const Eigen::MatrixXd irf = structural_irf(draws[d], fit.shock, cfg.shock_size, h_max);
    for (Index v = 0; v < n; ++v)
      for (std::size_t h = 0; h < cfg.horizons.size(); ++h)
        per_var[static_cast<std::size_t>(v)](static_cast<Index>(d), static_cast<Index>(h)) = irf(v, cfg.horizons[h]);
  }
  write_var_irf(out, "fsvar", fit.names, cfg.horizons, per_var, {}, cfg.bands);

  json extra = {{"method", "fsvar"}, {"shock", fit.names[static_cast<std::size_t>(fit.shock)]}};
  if (fit.n_scores > 0) {
    const ShockSpec spec{fit.score_offset, fit.shock, cfg.shock_size};
    const DistributionalIrf dirf =
        functional_irf(draws, fit.model, spec, cfg.horizons, fit.support, fit.n_grid, cfg.threads);
    if (dirf.num_draws() == 0) throw NumericalError("every posterior draw is explosive; no steady state");
    if (dirf.dropped > 0)
      std::cerr << "warning: dropped " << dirf.dropped << " draws without a steady state\n";
    write_distributional(out, cfg, "fsvar", dirf, nullptr);
    extra["dropped_draws"] = dirf.dropped;
  }
  out.finish(extra);
  std::cout << "responses to " << fit.names[static_cast<std::size_t>(fit.shock)] << " written to "
            << cfg.output_dir << "\n";
}

void cmd_flp(const RunConfig& cfg) {
  const FitArtifacts fit = load_fit(cfg);
  if (fit.n_scores == 0) throw DataError("flp needs density scores; the fit has none");

  FlpSpec spec;
  spec.shock = fit.shock;
  spec.p = cfg.flp_p;
  for (Index i = 0; i < fit.n_scores; ++i) spec.responses.push_back(fit.score_offset + i);
  const HacKind kind = cfg.hac == "newey-west" ? HacKind::NeweyWest : HacKind::DriscollKraay;

  // the impulse sd comes from the same sample at every horizon
  std::vector<FlpFit> fits;
  for (Index h : cfg.horizons) fits.push_back(flp_fit(fit.z, spec, h, fit.names, cfg.hac_lags, kind));
  const Eigen::MatrixXd irf = flp_score_irf(fits, cfg.shock_size);

  OutputDir out(cfg, "flp");
  const double scale = fits.front().shock_sd * cfg.shock_size;
  const Index n_sims = std::max<Index>(cfg.flp_sims, 2);
  std::vector<std::string> names;
  std::vector<Eigen::MatrixXd> samples;
  std::vector<Eigen::VectorXd> points;
  for (Index i = 0; i < fit.n_scores; ++i) {
    names.push_back(fit.names[static_cast<std::size_t>(fit.score_offset + i)]);
    // evenly spaced Gaussian quantiles stand in for draws, so the bands are exact normal bands
    Eigen::MatrixXd s(n_sims, static_cast<Index>(cfg.horizons.size()));
    for (std::size_t h = 0; h < cfg.horizons.size(); ++h) {
      const double se = std::sqrt(std::max(0.0, fits[h].beta_cov()(i, i))) * std::abs(scale);
      for (Index r = 0; r < n_sims; ++r) {
        const double u = (static_cast<double>(r) + 0.5) / static_cast<double>(n_sims);
        s(r, static_cast<Index>(h)) = irf(i, static_cast<Index>(h)) +
                                      se * boost::math::quantile(boost::math::normal(), u);
      }
    }
    samples.push_back(std::move(s));
    points.push_back(irf.row(i).transpose());
  }
  write_var_irf(out, "flp", names, cfg.horizons, samples, points, cfg.bands);

  const FlpIrf res = flp_functional_irf(fits, fit.model, fit.support, cfg.shock_size, n_sims, cfg.seed,
                                        fit.n_grid, cfg.threads);
  write_distributional(out, cfg, "flp", res.sims, &res.point);
  out.finish({{"method", "flp"},
              {"shock", fit.names[static_cast<std::size_t>(fit.shock)]},
              {"hac", cfg.hac},
              {"flp_p", cfg.flp_p}});
  std::cout << "local projection responses written to " << cfg.output_dir << "\n";
}

void cmd_mc(const RunConfig& cfg) {
  const DgpSpec spec = dgp_from_config(cfg);
  McConfig mc;
  mc.k_list = cfg.k_list;
  mc.include_scree = cfg.scree;
  mc.scree_threshold = cfg.scree_threshold;
  mc.horizons = cfg.horizons;
  mc.shocks = {0, 1};
  mc.n_reps = cfg.reps;
  mc.n_draws = cfg.n_draws;
  mc.p = cfg.p;
  mc.lambda1 = cfg.lambda1;
  mc.lambda2 = cfg.lambda2;
  mc.seed = cfg.seed;
  mc.threads = cfg.threads;
  const McResult res = mc_correlation_study(spec, mc);

  std::string table = "shock,horizon,k,mean_corr\n";
  std::string reps = "shock,horizon,k,rep,corr\n";
  for (const auto& r : res.rows) {
    const std::string key = std::to_string(r.shock + 1) + "," + std::to_string(r.horizon) + "," + r.k_label;
    table += key + "," + format_double(r.mean_corr) + "\n";
    for (Index i = 0; i < r.per_rep.size(); ++i)
      reps += key + "," + std::to_string(i + 1) + "," + format_double(r.per_rep[i]) + "\n";
  }
  OutputDir out(cfg, "mc");
  out.write("mc_table.csv", table);
  out.write("mc_reps.csv", reps);
  out.finish({{"dgp", cfg.dgp}, {"reps", cfg.reps}, {"dropped_draws", res.dropped_draws}});
  std::cout << table;
}

void cmd_mise_cv(const RunConfig& cfg) {
  const DgpSpec spec = dgp_from_config(cfg);
  MiseConfig mc;
  mc.k_max = cfg.mise_k_max;
  mc.n_reps = cfg.reps;
  mc.train_share = cfg.train_share;
  mc.seed = cfg.seed;
  mc.threads = cfg.threads;
  const MiseResult res = mise_cv_study(spec, mc);

  std::string table = "transform,k,mise,ratio\n";
  for (std::size_t t = 0; t < res.transforms.size(); ++t)
    for (Index k = 0; k < mc.k_max; ++k)
      table += to_string(res.transforms[t]) + "," + std::to_string(k + 1) + "," +
               format_double(res.mise(static_cast<Index>(t), k)) + "," +
               format_double(res.ratio(static_cast<Index>(t), k)) + "\n";
  OutputDir out(cfg, "mise-cv");
  out.write("mise_table.csv", table);
  out.finish({{"dgp", cfg.dgp}, {"reps", cfg.reps}});
  std::cout << table;
}

void cmd_gini(const RunConfig& cfg, const std::string& density_csv) {
  if (!density_csv.empty()) {
    if (!fs::exists(density_csv)) throw DataError("density file not found: " + density_csv);
    DensityCurve p = density_from_csv(read_text_file(density_csv), density_csv);
    std::cout << format_double(gini(p)) << "\n";
    return;
  }
  if (cfg.micro_csv.empty()) throw ConfigError("gini needs a density CSV argument or micro_csv");
  if (!cfg.support_set) throw ConfigError("micro_csv needs support_lower and support_upper");
  if (!fs::exists(cfg.micro_csv)) throw DataError("micro file not found: " + cfg.micro_csv);
  const MicroPanel micro = read_micro_csv(cfg.micro_csv, cfg.support, static_cast<std::size_t>(cfg.min_obs));
  const auto dens = estimate_panel(micro, cfg.n_grid, cfg.threads);
  std::string csv = "period,gini\n";
  for (std::size_t t = 0; t < dens.size(); ++t) csv += micro.periods[t] + "," + format_double(gini(dens[t])) + "\n";
  OutputDir out(cfg, "gini");
  out.write("gini_series.csv", csv);
  out.finish();
  std::cout << "Gini for " << dens.size() << " periods written to " << cfg.output_dir << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Functional structural VARs for density-valued data"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string density_csv;
  bool list_keys = false;
  app.add_flag("--list-keys", list_keys, "print every config key with its default and exit");

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"simulate", "draw a synthetic macro/micro panel"},
                      {"fit", "densities -> LQD -> FPCA -> Bayesian VAR posterior"},
                      {"irf", "distributional responses from a fitted posterior"},
                      {"flp", "distributional responses by local projections"},
                      {"mc", "Monte Carlo correlation study"},
                      {"mise-cv", "cross-validated approximation error by transform"},
                      {"gini", "Gini coefficient of a density or a micro panel"}};
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("-c,--config", config_path, "key = value config file");
    sub->add_option("--set", overrides, "override one key, e.g. --set seed=7")->take_all();
    if (std::string(s.name) == "gini") sub->add_option("density", density_csv, "x,value density CSV");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (list_keys) {
      const RunConfig defaults;
      std::cout << defaults.canonical();
      return kExitOk;
    }
    app.exit(e);
    return kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = build_config(config_path, overrides);
    if (name == "simulate") cmd_simulate(cfg);
    else if (name == "fit") cmd_fit(cfg);
    else if (name == "irf") cmd_irf(cfg);
    else if (name == "flp") cmd_flp(cfg);
    else if (name == "mc") cmd_mc(cfg);
    else if (name == "mise-cv") cmd_mise_cv(cfg);
    else if (name == "gini") cmd_gini(cfg, density_csv);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace fsvar::cli
