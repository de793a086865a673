#include "fsvar/io.hpp"

#include "fsvar/errors.hpp"
#include "fsvar/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fsvar {

using nlohmann::json;

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(std::move(row));
  }
  return a;
}

Eigen::VectorXd json_vec(const json& a) {
  Eigen::VectorXd v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Index>(i)] = a[i].get<double>();
  return v;
}

Eigen::MatrixXd json_mat(const json& a, Index cols_if_empty = 0) {
  const Index rows = static_cast<Index>(a.size());
  const Index cols = rows > 0 ? static_cast<Index>(a[0].size()) : cols_if_empty;
  Eigen::MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(a[static_cast<std::size_t>(r)].size()) != cols)
      throw DataError("ragged matrix in JSON");
    for (Index c = 0; c < cols; ++c) m(r, c) = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

double field_double(const CsvTable& t, std::size_t r, std::size_t c, const std::string& source) {
  try {
    return parse_double(t.rows[r][c]);
  } catch (const std::invalid_argument&) {
    throw DataError(source + ", line " + std::to_string(t.line_numbers[r]) + ": '" + t.rows[r][c] +
                    "' is not a number");
  }
}

void expect_header(const CsvTable& t, const std::vector<std::string>& want, const std::string& source) {
  if (t.header != want) {
    std::string w;
    for (const auto& h : want) w += (w.empty() ? "" : ",") + h;
    throw DataError(source + ", line 1: expected header '" + w + "'");
  }
}
}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (t.empty() || res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw ConfigError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot write " + path.string() + ": " + ec.message());
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size())
      throw DataError(source + ", line " + std::to_string(lineno) + ": expected " +
                      std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw DataError(source + ": empty file, header required");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text_file(path), path.string()); }

MicroPanel read_micro_csv(const std::filesystem::path& path, const Support& support, std::size_t min_obs) {
  const std::string src = path.string();
  const CsvTable t = read_csv(path);
  expect_header(t, {"period", "value"}, src);
  std::map<std::string, std::vector<double>> by_period;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r][0].empty()) throw DataError(src + ", line " + std::to_string(t.line_numbers[r]) + ": empty period");
    const double v = field_double(t, r, 1, src);
    if (!support.contains(v))
      throw DataError(src + ", line " + std::to_string(t.line_numbers[r]) + ": value " + t.rows[r][1] +
                      " outside the support [" + format_double(support.lower) + ", " +
                      format_double(support.upper) + "]");
    by_period[t.rows[r][0]].push_back(v);
  }
  MicroPanel p;
  p.support = support;
  for (auto& [k, v] : by_period) {
    p.periods.push_back(k);
    p.samples.push_back(std::move(v));
  }
  if (p.periods.empty()) throw DataError(src + ": no observations");
  p.validate(min_obs);
  return p;
}

std::string micro_to_csv(const MicroPanel& panel) {
  std::string out = "period,value\n";
  for (std::size_t t = 0; t < panel.periods.size(); ++t)
    for (double v : panel.samples[t]) {
      out += panel.periods[t];
      out += ',';
      out += format_double(v);
      out += '\n';
    }
  return out;
}

MacroSeries read_macro_csv(const std::filesystem::path& path) {
  const std::string src = path.string();
  const CsvTable t = read_csv(path);
  if (t.header.size() < 2 || t.header[0] != "period")
    throw DataError(src + ", line 1: expected header 'period,<variable>,...'");
  MacroSeries m;
  m.names.assign(t.header.begin() + 1, t.header.end());
  std::vector<std::size_t> order(t.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return t.rows[a][0] < t.rows[b][0]; });
  m.values.resize(static_cast<Index>(t.rows.size()), static_cast<Index>(m.names.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t r = order[i];
    if (i > 0 && t.rows[r][0] == m.periods.back())
      throw DataError(src + ", line " + std::to_string(t.line_numbers[r]) + ": duplicate period " + t.rows[r][0]);
    m.periods.push_back(t.rows[r][0]);
    for (std::size_t c = 1; c < t.header.size(); ++c)
      m.values(static_cast<Index>(i), static_cast<Index>(c - 1)) = field_double(t, r, c, src);
  }
  if (m.periods.empty()) throw DataError(src + ": no rows");
  return m;
}

std::string macro_to_csv(const MacroSeries& m) {
  std::string out = "period";
  for (const auto& n : m.names) out += "," + n;
  out += '\n';
  for (Index t = 0; t < m.values.rows(); ++t) {
    out += m.periods[static_cast<std::size_t>(t)];
    for (Index j = 0; j < m.values.cols(); ++j) out += "," + format_double(m.values(t, j));
    out += '\n';
  }
  return out;
}

namespace {
std::string xy_csv(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  std::string out = "x,value\n";
  for (Index i = 0; i < x.size(); ++i) out += format_double(x[i]) + "," + format_double(y[i]) + "\n";
  return out;
}

void xy_from_csv(const std::string& text, const std::string& source, Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const CsvTable t = parse_csv(text, source);
  expect_header(t, {"x", "value"}, source);
  x.resize(static_cast<Index>(t.rows.size()));
  y.resize(x.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    x[static_cast<Index>(r)] = field_double(t, r, 0, source);
    y[static_cast<Index>(r)] = field_double(t, r, 1, source);
    if (r > 0 && !(x[static_cast<Index>(r)] > x[static_cast<Index>(r) - 1]))
      throw DataError(source + ", line " + std::to_string(t.line_numbers[r]) + ": grid not increasing");
  }
  if (x.size() < 2) throw DataError(source + ": need at least two grid points");
}
}  // namespace

std::string density_to_csv(const DensityCurve& p) { return xy_csv(p.grid, p.values); }

DensityCurve density_from_csv(const std::string& text, const std::string& source) {
  DensityCurve p;
  xy_from_csv(text, source, p.grid, p.values);
  p.support = {p.grid[0], p.grid[p.grid.size() - 1]};
  return p;
}

std::string lqd_to_csv(const LqdCurve& f) { return xy_csv(f.grid01, f.values); }

LqdCurve lqd_from_csv(const std::string& text, double support_sup, const std::string& source) {
  LqdCurve f;
  xy_from_csv(text, source, f.grid01, f.values);
  f.support_sup = support_sup;
  return f;
}

std::string density_to_json(const DensityCurve& p) {
  json j;
  j["support"] = {p.support.lower, p.support.upper};
  j["grid"] = vec_json(p.grid);
  j["values"] = vec_json(p.values);
  return j.dump();
}

DensityCurve density_from_json(const std::string& text) {
  const json j = parse_json(text, "density");
  DensityCurve p;
  p.support = {j.at("support")[0].get<double>(), j.at("support")[1].get<double>()};
  p.grid = json_vec(j.at("grid"));
  p.values = json_vec(j.at("values"));
  return p;
}

std::string lqd_to_json(const LqdCurve& f) {
  json j;
  j["support_sup"] = f.support_sup;
  j["grid01"] = vec_json(f.grid01);
  j["values"] = vec_json(f.values);
  return j.dump();
}

LqdCurve lqd_from_json(const std::string& text) {
  const json j = parse_json(text, "lqd");
  LqdCurve f;
  f.support_sup = j.at("support_sup").get<double>();
  f.grid01 = json_vec(j.at("grid01"));
  f.values = json_vec(j.at("values"));
  return f;
}

std::string fpca_to_json(const FpcaModel& m) {
  json j;
  j["support_sup"] = m.mean_curve.support_sup;
  j["grid01"] = vec_json(m.mean_curve.grid01);
  j["mean"] = vec_json(m.mean_curve.values);
  j["basis"] = mat_json(m.basis.transpose());  // one row per component
  j["scores"] = mat_json(m.scores);
  j["singular_values"] = vec_json(m.singular_values);
  j["explained_shares"] = vec_json(m.explained_shares);
  j["total_variance"] = m.total_variance;
  return j.dump();
}

FpcaModel fpca_from_json(const std::string& text) {
  try {
    const json j = parse_json(text, "FPCA model");
    FpcaModel m;
    m.mean_curve.support_sup = j.at("support_sup").get<double>();
    m.mean_curve.grid01 = json_vec(j.at("grid01"));
    m.mean_curve.values = json_vec(j.at("mean"));
    m.basis = json_mat(j.at("basis")).transpose();
    m.scores = json_mat(j.at("scores"));
    m.singular_values = json_vec(j.at("singular_values"));
    m.explained_shares = json_vec(j.at("explained_shares"));
    m.total_variance = j.at("total_variance").get<double>();
    if (m.basis.rows() != m.mean_curve.grid01.size() || m.scores.cols() != m.basis.cols())
      throw DataError("FPCA model: inconsistent dimensions");
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("FPCA model: ") + e.what());
  }
}

std::string draws_to_csv(const std::vector<PosteriorDraw>& draws) {
  std::string out = "draw,matrix,row,col,value\n";
  for (std::size_t d = 0; d < draws.size(); ++d) {
    const std::string ds = std::to_string(d);
    auto emit = [&](const char* name, const Eigen::MatrixXd& m) {
      for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
          out += ds + "," + name + "," + std::to_string(r) + "," + std::to_string(c) + "," +
                 format_double(m(r, c)) + "\n";
    };
    emit("Pi", draws[d].Pi);
    emit("Omega", draws[d].Omega);
  }
  return out;
}

std::vector<PosteriorDraw> draws_from_csv(const std::string& text) {
  const CsvTable t = parse_csv(text, "draws");
  expect_header(t, {"draw", "matrix", "row", "col", "value"}, "draws");
  struct Entry {
    Index r, c;
    double v;
  };
  std::map<Index, std::map<std::string, std::vector<Entry>>> by_draw;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const Index d = std::stoll(row[0]);
    by_draw[d][row[1]].push_back({static_cast<Index>(std::stoll(row[2])),
                                  static_cast<Index>(std::stoll(row[3])), field_double(t, i, 4, "draws")});
  }
  std::vector<PosteriorDraw> out;
  for (auto& [d, mats] : by_draw) {
    if (d != static_cast<Index>(out.size())) throw DataError("draws: draw indices are not contiguous");
    auto build = [&](const std::string& name) {
      const auto& es = mats[name];
      Index rows = 0, cols = 0;
      for (const auto& e : es) {
        rows = std::max(rows, e.r + 1);
        cols = std::max(cols, e.c + 1);
      }
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
      for (const auto& e : es) m(e.r, e.c) = e.v;
      return m;
    };
    PosteriorDraw pd;
    pd.Pi = build("Pi");
    pd.Omega = build("Omega");
    Eigen::LLT<Eigen::MatrixXd> llt(pd.Omega);
    if (pd.Omega.size() == 0 || llt.info() != Eigen::Success)
      throw DataError("draws: Omega of draw " + std::to_string(d) + " is not positive definite");
    pd.A0inv = llt.matrixL();
    out.push_back(std::move(pd));
  }
  return out;
}

std::string posterior_to_json(const NiwPosterior& post) {
  json j;
  j["Gamma_bar"] = mat_json(post.Gamma_bar);
  j["Psi_bar"] = mat_json(post.Psi_bar);
  j["nu_bar"] = post.nu_bar;
  j["Phi_bar"] = mat_json(post.Phi_bar);
  return j.dump();
}

std::string matrix_to_json(const Eigen::MatrixXd& m) { return mat_json(m).dump(); }

}  // namespace fsvar
