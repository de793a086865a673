#pragma once

#include "fsvar/bvar.hpp"
#include "fsvar/fpca.hpp"
#include "fsvar/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fsvar {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Parses a full string as a double; throws std::invalid_argument otherwise.
double parse_double(const std::string& s);

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

std::string read_text_file(const std::filesystem::path& path);
/// Writes atomically enough for batch use (temp file + rename). Creates parent
/// directories. Throws ConfigError if the location is not writable.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Comma-separated file with a header line. Fields are trimmed; quoting is
/// not supported.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};
CsvTable parse_csv(const std::string& text, const std::string& source = "csv");
CsvTable read_csv(const std::filesystem::path& path);

/// `period,value` rows; periods sorted lexicographically give time order.
MicroPanel read_micro_csv(const std::filesystem::path& path, const Support& support,
                          std::size_t min_obs = 10);
std::string micro_to_csv(const MicroPanel& panel);

/// `period,<var1>,<var2>,...`, one row per period.
struct MacroSeries {
  std::vector<std::string> periods;
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // periods x variables
};
MacroSeries read_macro_csv(const std::filesystem::path& path);
std::string macro_to_csv(const MacroSeries& m);

/// `x,value` CSV for curves; LQD curves use the [0, 1] grid as x.
std::string density_to_csv(const DensityCurve& p);
DensityCurve density_from_csv(const std::string& text, const std::string& source = "csv");
std::string lqd_to_csv(const LqdCurve& f);
LqdCurve lqd_from_csv(const std::string& text, double support_sup, const std::string& source = "csv");

std::string density_to_json(const DensityCurve& p);
DensityCurve density_from_json(const std::string& text);
std::string lqd_to_json(const LqdCurve& f);
LqdCurve lqd_from_json(const std::string& text);

std::string fpca_to_json(const FpcaModel& m);
FpcaModel fpca_from_json(const std::string& text);

/// Long format `draw,matrix,row,col,value` with matrix in {Pi, Omega}.
std::string draws_to_csv(const std::vector<PosteriorDraw>& draws);
std::vector<PosteriorDraw> draws_from_csv(const std::string& text);

/// Posterior hyperparameters as JSON (Psi_bar in the m x n layout).
std::string posterior_to_json(const NiwPosterior& post);

/// Dense matrix as a JSON array of rows.
std::string matrix_to_json(const Eigen::MatrixXd& m);

}  // namespace fsvar
