#include "hmr/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "hmr/csv.hpp"
#include "hmr/errors.hpp"

namespace hmr {

namespace {

// every key any stage understands; typos get rejected instead of ignored
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      // shared
      "threads", "index_symbol", "min_coverage", "include_short_sessions",
      "anchor_weekday", "annualization",
      // decomposition scales
      "j_daily", "j_weekly",
      // factor building
      "controls",
      // sorts
      "sort_variable", "sort_window", "sort_holding", "sort_step",
      "sort_quantiles", "sort_contemporaneous", "sort_hac_lags",
      "sort_min_obs_frac",
      // cross-section / tvp
      "frequency", "spec", "with_controls", "shanken", "bandwidth",
      "iterations", "burn_frac", "seed", "normalized_weights",
      "write_lambda_path",
      // simulation
      "sim_assets", "sim_days", "sim_seed", "sim_daily_var",
      "sim_jump_intensity", "sim_jump_scale", "sim_jump_sign", "sim_rf",
      "sim_start", "sim_index_var_scale",
  };
  return keys;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

Config Config::load(const std::string& path,
                    const std::vector<std::string>& overrides) {
  Config cfg;
  const auto put = [&](const std::string& key, const std::string& value,
                       const std::string& origin) {
    if (!known_keys().count(key))
      throw ConfigError("unknown configuration key '" + key + "' (" + origin +
                        ")");
    cfg.values_[key] = value;
  };

  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      const size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) +
                          " is not key=value: '" + t + "'");
      put(trim(t.substr(0, eq)), trim(t.substr(eq + 1)),
          path + ":" + std::to_string(lineno));
    }
  }

  for (const auto& key : known_keys()) {
    std::string env = "HMR_" + key;
    std::transform(env.begin(), env.end(), env.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (const char* v = std::getenv(env.c_str())) put(key, v, "env " + env);
  }

  for (const auto& item : overrides) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + item + "'");
    put(trim(item.substr(0, eq)), trim(item.substr(eq + 1)), "--set");
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
  if (!known_keys().count(key))
    throw ConfigError("internal: unregistered config key '" + key + "'");
  auto it = values_.find(key);
  const std::string v = it == values_.end() ? dflt : it->second;
  resolved_[key] = v;
  return v;
}

double Config::get_double(const std::string& key, double dflt) const {
  const std::string v = get_string(key, format_double(dflt));
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not a number: '" + v + "'");
  }
}

int Config::get_int(const std::string& key, int dflt) const {
  const std::string v = get_string(key, std::to_string(dflt));
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(d);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + v +
                      "'");
  }
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  const std::string v = get_string(key, dflt ? "true" : "false");
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "' is not a boolean: '" + v + "'");
}

uint64_t Config::get_u64(const std::string& key, uint64_t dflt) const {
  const std::string v = get_string(key, std::to_string(dflt));
  try {
    size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + v +
                      "'");
  }
}

std::string Config::resolved_echo() const {
  std::ostringstream out;
  for (const auto& [k, v] : resolved_) out << k << '=' << v << '\n';
  return out.str();
}

}  // namespace hmr
