#include "fsvar/errors.hpp"
#include "fsvar/io.hpp"
#include "fsvar/numeric.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace fsvar;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("fsvar_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::create_directories(d);
  return d / name;
}
}  // namespace

TEST(Io, DoubleFormatRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, i % 20 - 10);
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
}

TEST(Io, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST(Io, CsvFieldCountChecked) {
  const auto t = parse_csv("a,b\n1, 2\n\n3,4\n");
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "2");
  EXPECT_EQ(t.line_numbers[1], 4u);
  EXPECT_THROW(parse_csv("a,b\n1,2,3\n"), DataError);
  EXPECT_THROW(parse_csv(""), DataError);
}

TEST(Io, MicroPanelRoundTrip) {
  MicroPanel p;
  p.support = {0.0, 2.0};
  p.periods = {"2001", "2002"};
  for (int t = 0; t < 2; ++t) {
    std::vector<double> s;
    for (int i = 0; i < 12; ++i) s.push_back(0.1 * i + 0.05 * t);
    p.samples.push_back(s);
  }
  const auto path = scratch("micro.csv");
  write_text_file(path, micro_to_csv(p));
  const auto q = read_micro_csv(path, p.support);
  EXPECT_EQ(q.periods, p.periods);
  EXPECT_EQ(q.samples, p.samples);
  EXPECT_THROW(read_micro_csv(path, {0.0, 1.0}), DataError);
  EXPECT_THROW(read_micro_csv(path, p.support, 20), DataError);
}

TEST(Io, MacroRoundTripAndDuplicates) {
  MacroSeries m;
  m.periods = {"1", "2", "3"};
  m.names = {"gdp", "unc"};
  m.values.resize(3, 2);
  m.values << 1.5, -2, 0.25, 3, 1e-9, 4;
  const auto path = scratch("macro.csv");
  write_text_file(path, macro_to_csv(m));
  const auto r = read_macro_csv(path);
  EXPECT_EQ(r.names, m.names);
  EXPECT_EQ(r.values, m.values);
  write_text_file(path, "period,x\n1,2\n1,3\n");
  EXPECT_THROW(read_macro_csv(path), DataError);
  write_text_file(path, "period,x\n1,abc\n");
  EXPECT_THROW(read_macro_csv(path), DataError);
}

TEST(Io, CurvesRoundTrip) {
  DensityCurve p;
  p.support = {0.0, 3.0};
  p.grid = uniform_grid(0.0, 3.0, 7);
  p.values = Eigen::VectorXd::LinSpaced(7, 0.1, 0.5);
  const auto a = density_from_csv(density_to_csv(p));
  EXPECT_EQ(a.grid, p.grid);
  EXPECT_EQ(a.values, p.values);
  const auto b = density_from_json(density_to_json(p));
  EXPECT_EQ(b.values, p.values);
  EXPECT_EQ(b.support.upper, 3.0);
  LqdCurve f{uniform_grid(0, 1, 5), Eigen::VectorXd::LinSpaced(5, -1, 1), 3.0};
  EXPECT_EQ(lqd_from_json(lqd_to_json(f)).values, f.values);
  EXPECT_EQ(lqd_from_csv(lqd_to_csv(f), 3.0).grid01, f.grid01);
  EXPECT_THROW(density_from_csv("x,value\n1,2\n0,3\n"), DataError);
}

TEST(Io, FpcaModelRoundTrip) {
  FpcaModel m;
  m.mean_curve = {uniform_grid(0, 1, 4), Eigen::VectorXd::LinSpaced(4, 0, 1), 2.0};
  m.basis = Eigen::MatrixXd::Random(4, 2);
  m.scores = Eigen::MatrixXd::Random(3, 2);
  m.singular_values = Eigen::VectorXd::LinSpaced(2, 2, 1);
  m.explained_shares = Eigen::VectorXd::LinSpaced(2, 0.6, 0.3);
  m.total_variance = 5.5;
  const auto r = fpca_from_json(fpca_to_json(m));
  EXPECT_EQ(r.basis, m.basis);
  EXPECT_EQ(r.scores, m.scores);
  EXPECT_EQ(r.mean_curve.values, m.mean_curve.values);
  EXPECT_EQ(r.total_variance, 5.5);
  EXPECT_THROW(fpca_from_json("{not json"), DataError);
}

TEST(Io, DrawsRoundTrip) {
  PosteriorDraw d;
  d.Pi = Eigen::MatrixXd::Random(2, 3);
  d.Omega.resize(2, 2);
  d.Omega << 1.0, 0.2, 0.2, 0.7;
  d.A0inv = d.Omega.llt().matrixL();
  const auto r = draws_from_csv(draws_to_csv({d, d}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[1].Pi, d.Pi);
  EXPECT_EQ(r[1].Omega, d.Omega);
  EXPECT_LT((r[0].A0inv - d.A0inv).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Io, WriteCreatesDirectories) {
  const auto path = scratch("a/b/c.txt");
  write_text_file(path, "hello");
  EXPECT_EQ(read_text_file(path), "hello");
  EXPECT_THROW(read_text_file(scratch("missing.txt")), DataError);
}
