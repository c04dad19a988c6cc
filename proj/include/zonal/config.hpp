#ifndef ZONAL_CONFIG_HPP
#define ZONAL_CONFIG_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zonal/common.hpp"
#include "zonal/linalg.hpp"
#include "zonal/quadrature.hpp"

namespace zonal {

/// Flat key = value run configuration. Keys a command does not consume are
/// rejected, and write(parse(text)) round-trips losslessly (keys are unique
/// and emitted in sorted order, which parse accepts back unchanged).
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      ZONAL_REQUIRE(eq != std::string::npos,
                    "config line " + std::to_string(lineno) + " is not key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      ZONAL_REQUIRE(!key.empty(), "config line " + std::to_string(lineno) + " has an empty key");
      ZONAL_REQUIRE(!cfg.values_.count(key), "duplicate config key: " + key);
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    ZONAL_REQUIRE(f.good(), "cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  std::string write() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    touch(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require_string(const std::string& key) const {
    touch(key);
    auto it = values_.find(key);
    ZONAL_REQUIRE(it != values_.end(), "missing required config key: " + key);
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    touch(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_double(key, it->second);
  }

  int get_int(const std::string& key, int fallback) const {
    touch(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const int v = std::stoi(it->second, &pos);
      ZONAL_REQUIRE(pos == it->second.size(), "config key " + key + " is not an integer");
      return v;
    } catch (const invalid_input&) {
      throw;
    } catch (...) {
      throw invalid_input("config key " + key + " is not an integer");
    }
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    touch(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      return std::stoull(it->second, nullptr, 0);
    } catch (...) {
      throw invalid_input("config key " + key + " is not an unsigned integer");
    }
  }

  /// Comma-separated decimal coordinates in the dual-basis pairing
  /// (coefficients against the simple roots).
  std::vector<double> get_vector(const std::string& key) const {
    touch(key);
    auto it = values_.find(key);
    ZONAL_REQUIRE(it != values_.end(), "missing required config key: " + key);
    std::vector<double> out;
    std::string item;
    std::istringstream ss(it->second);
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    ZONAL_REQUIRE(!out.empty(), "config key " + key + " has no coordinates");
    return out;
  }

  /// Call after a command consumed its keys: anything untouched is unknown.
  void reject_unknown_keys() const {
    for (const auto& [k, v] : values_)
      ZONAL_REQUIRE(consumed_.count(k) > 0, "unknown config key: " + k);
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static double parse_double(const std::string& key, const std::string& text) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(text, &pos);
      ZONAL_REQUIRE(pos == text.size(), "config key " + key + " is not a number");
      return v;
    } catch (const invalid_input&) {
      throw;
    } catch (...) {
      throw invalid_input("config key " + key + " is not a number");
    }
  }

  void touch(const std::string& key) const { consumed_.insert(key); }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace zonal

#endif
