#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hmr {

// Layered key=value configuration: built-in defaults, then config file,
// then HMR_<KEY> environment variables, then --set overrides.  Unknown
// keys are rejected up front (ConfigError), and every stage echoes the
// values it resolved into <stage>.config.resolved for provenance.
class Config {
 public:
  // `path` may be empty (no file).  `overrides` holds "key=value" items.
  static Config load(const std::string& path,
                     const std::vector<std::string>& overrides);

  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  int get_int(const std::string& key, int dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  uint64_t get_u64(const std::string& key, uint64_t dflt) const;

  bool has(const std::string& key) const;

  // sorted key=value lines for every key this config resolved (explicit
  // entries plus defaults recorded by the getters)
  std::string resolved_echo() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> resolved_;
};

}  // namespace hmr
