#include "fsvar/config.hpp"

#include "fsvar/errors.hpp"
#include "fsvar/io.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

namespace fsvar {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long to_int(const std::string& v) {
  long long x = 0;
  const auto t = trim(v);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t x = 0;
  const auto t = trim(v);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& v) {
  const auto t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw std::invalid_argument("expected true/false, got '" + v + "'");
}

std::string join_int(const std::vector<Index>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

std::string join_double(const std::vector<double>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + format_double(x);
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;
struct Field {
  Setter set;
  Getter get;
};

#define FSVAR_STR(name) \
  {#name, {[](RunConfig& c, const std::string& v) { c.name = trim(v); }, [](const RunConfig& c) { return c.name; }}}
#define FSVAR_INT(name)                                                                     \
  {#name, {[](RunConfig& c, const std::string& v) { c.name = static_cast<Index>(to_int(v)); }, \
           [](const RunConfig& c) { return std::to_string(c.name); }}}
#define FSVAR_DBL(name)                                                             \
  {#name, {[](RunConfig& c, const std::string& v) { c.name = parse_double(v); }, \
           [](const RunConfig& c) { return format_double(c.name); }}}
#define FSVAR_BOOL(name)                                                       \
  {#name, {[](RunConfig& c, const std::string& v) { c.name = to_bool(v); }, \
           [](const RunConfig& c) { return std::string(c.name ? "true" : "false"); }}}
#define FSVAR_U64(name)                                                       \
  {#name, {[](RunConfig& c, const std::string& v) { c.name = to_u64(v); }, \
           [](const RunConfig& c) { return std::to_string(c.name); }}}
#define FSVAR_INTS(name)                                                        \
  {#name, {[](RunConfig& c, const std::string& v) {                             \
             c.name.clear();                                                    \
             for (const auto& s : split_list(v)) c.name.push_back(static_cast<Index>(to_int(s))); \
           },                                                                   \
           [](const RunConfig& c) { return join_int(c.name); }}}
#define FSVAR_DBLS(name)                                                                  \
  {#name, {[](RunConfig& c, const std::string& v) {                                       \
             c.name.clear();                                                              \
             for (const auto& s : split_list(v)) c.name.push_back(parse_double(s));       \
           },                                                                             \
           [](const RunConfig& c) { return join_double(c.name); }}}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> f = {
      FSVAR_STR(macro_csv),
      FSVAR_STR(micro_csv),
      FSVAR_STR(output_dir),
      FSVAR_STR(fit_dir),
      {"support_lower",
       {[](RunConfig& c, const std::string& v) {
          c.support.lower = parse_double(v);
          c.support_set = true;
        },
        [](const RunConfig& c) { return format_double(c.support.lower); }}},
      {"support_upper",
       {[](RunConfig& c, const std::string& v) {
          c.support.upper = parse_double(v);
          c.support_set = true;
        },
        [](const RunConfig& c) { return format_double(c.support.upper); }}},
      FSVAR_INT(n_grid),
      FSVAR_INT(min_obs),
      FSVAR_INT(k),
      FSVAR_DBL(scree_threshold),
      FSVAR_INT(p),
      FSVAR_DBL(lambda1),
      FSVAR_DBL(lambda2),
      {"persistent",
       {[](RunConfig& c, const std::string& v) {
          c.persistent.clear();
          for (const auto& s : split_list(v)) c.persistent.push_back(to_bool(s) ? 1 : 0);
        },
        [](const RunConfig& c) {
          std::string s;
          for (int x : c.persistent) s += (s.empty() ? "" : ",") + std::to_string(x);
          return s;
        }}},
      FSVAR_INT(n_draws),
      FSVAR_U64(seed),
      FSVAR_STR(impulse),
      FSVAR_INT(shock),
      FSVAR_DBL(shock_size),
      FSVAR_INTS(horizons),
      FSVAR_DBLS(bands),
      FSVAR_DBLS(quantiles),
      FSVAR_INT(n_classes),
      FSVAR_BOOL(gini_percent),
      FSVAR_BOOL(write_long),
      FSVAR_STR(method),
      FSVAR_INT(flp_p),
      FSVAR_STR(hac),
      FSVAR_INT(hac_lags),
      FSVAR_INT(flp_sims),
      FSVAR_STR(dgp),
      FSVAR_U64(structure_seed),
      FSVAR_INT(t_len),
      FSVAR_INT(n_micro),
      FSVAR_INT(burn_in),
      FSVAR_INT(reps),
      FSVAR_INTS(k_list),
      FSVAR_BOOL(scree),
      FSVAR_INT(mise_k_max),
      FSVAR_DBL(train_share),
      {"threads",
       {[](RunConfig& c, const std::string& v) { c.threads = static_cast<unsigned>(to_u64(v)); },
        [](const RunConfig& c) { return std::to_string(c.threads); }}},
  };
  return f;
}

#undef FSVAR_STR
#undef FSVAR_INT
#undef FSVAR_DBL
#undef FSVAR_BOOL
#undef FSVAR_U64
#undef FSVAR_INTS
#undef FSVAR_DBLS

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ConfigError(where.empty() ? msg : where + ": " + msg);
}
}  // namespace

std::string library_version() { return FSVAR_VERSION; }

void RunConfig::set(const std::string& key, const std::string& value, const std::string& where) {
  const auto& f = fields();
  const auto it = f.find(key);
  if (it == f.end()) fail(where, "unknown key '" + key + "'");
  try {
    it->second.set(*this, value);
  } catch (const std::invalid_argument& e) {
    fail(where, key + ": " + e.what());
  }
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(support.valid(), "support_lower must be below support_upper");
  need(n_grid >= 64, "n_grid must be at least 64");
  need(min_obs >= 2, "min_obs must be at least 2");
  need(k >= 0, "k must be non-negative (0 = scree rule)");
  need(scree_threshold > 0.0 && scree_threshold <= 1.0, "scree_threshold must lie in (0, 1]");
  need(p >= 1, "p must be at least 1");
  need(lambda1 > 0.0, "lambda1 must be positive");
  need(lambda2 >= 0.0, "lambda2 must be non-negative");
  need(n_draws >= 1, "n_draws must be at least 1");
  need(shock >= 0, "shock must be non-negative (0 = last variable)");
  need(!horizons.empty(), "horizons must not be empty");
  for (auto h : horizons) need(h >= 0, "horizons must be non-negative");
  need(!bands.empty(), "bands must not be empty");
  for (auto b : bands) need(b > 0.0 && b < 1.0, "band levels must lie in (0, 1)");
  for (auto q : quantiles) need(q > 0.0 && q < 1.0, "quantiles must lie in (0, 1)");
  need(n_classes >= 2, "n_classes must be at least 2");
  need(method == "fsvar" || method == "flp", "method must be fsvar or flp");
  need(flp_p >= 0, "flp_p must be non-negative");
  need(hac == "driscoll-kraay" || hac == "newey-west", "hac must be driscoll-kraay or newey-west");
  need(hac_lags >= -1, "hac_lags must be -1 (automatic) or non-negative");
  need(flp_sims >= 0, "flp_sims must be non-negative");
  need(dgp == "dgp1" || dgp == "dgp2", "dgp must be dgp1 or dgp2");
  need(t_len >= 20, "t_len must be at least 20");
  need(n_micro >= 10, "n_micro must be at least 10");
  need(burn_in >= 0, "burn_in must be non-negative");
  need(reps >= 1, "reps must be at least 1");
  for (auto kk : k_list) need(kk >= 1, "k_list entries must be positive");
  need(!k_list.empty() || scree, "k_list is empty and scree is off");
  need(mise_k_max >= 1, "mise_k_max must be at least 1");
  need(train_share > 0.0 && train_share < 1.0, "train_share must lie in (0, 1)");
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [k, f] : fields()) out += k + " = " + f.get(*this) + "\n";
  return out;
}

std::string RunConfig::hash() const { return hex64(fnv1a64(canonical())); }

RunConfig RunConfig::parse(const std::string& text, const std::string& source) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = source + ", line " + std::to_string(lineno);
    if (eq == std::string::npos) fail(where, "expected 'key = value'");
    c.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)), where);
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError&) {
    throw ConfigError("cannot read config file " + path);
  }
  return parse(text, path);
}

std::vector<std::string> RunConfig::known_keys() {
  std::vector<std::string> out;
  for (const auto& [k, f] : fields()) out.push_back(k);
  return out;
}

}  // namespace fsvar
