#include "commands.hpp"

#include "fsvar/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {
fs::path workdir(const std::string& name) {
  const auto d = fs::temp_directory_path() / "fsvar_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "fsvar");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return fsvar::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) { return fsvar::read_text_file(p); }
}  // namespace

TEST(Cli, SimulateFitIrfPipeline) {
  const auto d = workdir("pipeline");
  const std::string sim = (d / "sim").string(), fit = (d / "fit").string();
  ASSERT_EQ(call({"simulate", "--set", "output_dir=" + sim, "t_len=60", "n_micro=300", "burn_in=50",
                  "seed=3"}),
            0);
  for (const char* f : {"macro.csv", "micro.csv", "truth.json", "manifest.json"})
    EXPECT_TRUE(fs::exists(fs::path(sim) / f)) << f;

  const std::vector<std::string> fit_args{
      "--set", "output_dir=" + fit, "macro_csv=" + sim + "/macro.csv", "micro_csv=" + sim + "/micro.csv",
      "support_lower=0", "support_upper=6", "k=2", "p=1", "n_draws=40", "n_grid=200", "horizons=0,2"};
  std::vector<std::string> a{"fit"};
  a.insert(a.end(), fit_args.begin(), fit_args.end());
  ASSERT_EQ(call(a), 0);
  for (const char* f : {"z.csv", "fpca.json", "posterior.json", "draws.csv", "fit.json"})
    EXPECT_TRUE(fs::exists(fs::path(fit) / f)) << f;

  std::vector<std::string> b{"irf"};
  b.insert(b.end(), fit_args.begin(), fit_args.end());
  ASSERT_EQ(call(b), 0);
  EXPECT_TRUE(fs::exists(fs::path(fit) / "delta_summary.csv"));
  EXPECT_TRUE(fs::exists(fs::path(fit) / "gini.csv"));
  EXPECT_FALSE(fs::exists(fs::path(fit) / "delta_long.csv"));

  std::vector<std::string> c{"flp"};
  c.insert(c.end(), fit_args.begin(), fit_args.end());
  c.push_back("flp_sims=20");
  c.push_back("shock=1");
  ASSERT_EQ(call(c), 0);
}

TEST(Cli, McIsDeterministic) {
  const auto d = workdir("mc");
  auto run_mc = [&](const std::string& out) {
    return call({"mc", "--set", "output_dir=" + (d / out).string(), "t_len=40", "n_micro=200", "burn_in=20",
                 "reps=1", "k_list=1", "n_draws=20", "p=1", "horizons=0,1", "threads=2"});
  };
  ASSERT_EQ(run_mc("a"), 0);
  ASSERT_EQ(run_mc("b"), 0);
  for (const char* f : {"mc_table.csv", "mc_reps.csv"})
    EXPECT_EQ(slurp(d / "a" / f), slurp(d / "b" / f)) << f;
}

TEST(Cli, ExitCodes) {
  const auto d = workdir("codes");
  EXPECT_EQ(call({"fit", "--set", "bogus=1"}), fsvar::cli::kExitConfig);
  EXPECT_EQ(call({"fit", "--set", "support_lower=2", "support_upper=1"}), fsvar::cli::kExitConfig);
  EXPECT_EQ(call({"fit", "-c", (d / "missing.cfg").string()}), fsvar::cli::kExitConfig);
  fsvar::write_text_file(d / "bad.csv", "period,x\n1,abc\n");
  EXPECT_EQ(call({"fit", "--set", "macro_csv=" + (d / "bad.csv").string(), "output_dir=" + (d / "o").string()}),
            fsvar::cli::kExitData);
  EXPECT_EQ(call({"irf", "--set", "output_dir=" + (d / "nofit").string()}), fsvar::cli::kExitData);
  EXPECT_NE(call({"nonsense"}), 0);
}

TEST(Cli, GiniOfDensityFile) {
  const auto d = workdir("gini");
  std::string csv = "x,value\n";
  for (int i = 0; i <= 100; ++i) csv += fsvar::format_double(i / 100.0) + ",1\n";
  fsvar::write_text_file(d / "u.csv", csv);
  testing::internal::CaptureStdout();
  const int rc = call({"gini", (d / "u.csv").string()});
  const std::string out = testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);
  EXPECT_NEAR(std::stod(out.substr(out.find_first_of("0123456789"))), 1.0 / 3.0, 1e-3);
}
