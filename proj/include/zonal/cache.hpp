#ifndef ZONAL_CACHE_HPP
#define ZONAL_CACHE_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zonal/common.hpp"

namespace zonal {

/// One cached spherical-function grid. The header pins group, parameter,
/// quadrature fingerprint and code version; any mismatch invalidates the
/// payload and forces recomputation. Payload doubles are stored in
/// round-trip decimal form, so a cache hit reproduces results bit-exactly.
struct CacheEntry {
  std::string group;
  std::string lambda;
  std::uint64_t quad_fingerprint = 0;
  std::string code_fingerprint{version};
  // payload: grid coordinates, value, error estimate
  std::vector<std::vector<double>> coords;
  std::vector<double> value;
  std::vector<double> error;
};

namespace detail {

inline std::string cache_body(const CacheEntry& e) {
  std::string out = "zonal-cache v1\n";
  out += "group=" + e.group + "\n";
  out += "lambda=" + e.lambda + "\n";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(e.quad_fingerprint));
  out += std::string("quad=") + buf + "\n";
  out += "code=" + e.code_fingerprint + "\n";
  out += "rows=" + std::to_string(e.value.size()) + "\n";
  for (std::size_t i = 0; i < e.value.size(); ++i) {
    std::string row;
    for (double c : e.coords[i]) row += format_double(c) + ",";
    row += format_double(e.value[i]) + "," + format_double(e.error[i]);
    out += row + "\n";
  }
  return out;
}

}  // namespace detail

inline void write_cache(const CacheEntry& entry, const std::string& path) {
  ZONAL_REQUIRE(entry.coords.size() == entry.value.size() && entry.value.size() == entry.error.size(),
                "cache payload arrays must align");
  const std::string body = detail::cache_body(entry);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
  std::ofstream f(path, std::ios::binary);
  ZONAL_REQUIRE(f.good(), "cannot open cache file for writing: " + path);
  f << body << "checksum=" << buf << "\n";
  ZONAL_REQUIRE(f.good(), "failed writing cache file: " + path);
}

/// Returns nothing when the file is missing, corrupt (checksum mismatch) or
/// from another code version; the caller recomputes and rewrites.
inline std::optional<CacheEntry> read_cache(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  const std::size_t mark = text.rfind("checksum=");
  if (mark == std::string::npos || mark == 0) return std::nullopt;
  const std::string body = text.substr(0, mark);
  std::string sumline = text.substr(mark);
  while (!sumline.empty() && (sumline.back() == '\n' || sumline.back() == '\r')) sumline.pop_back();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
  if (sumline != std::string("checksum=") + buf) return std::nullopt;

  std::istringstream in(body);
  std::string line;
  if (!std::getline(in, line) || line != "zonal-cache v1") return std::nullopt;
  CacheEntry e;
  auto field = [&](const char* key) -> std::optional<std::string> {
    if (!std::getline(in, line)) return std::nullopt;
    const std::string prefix = std::string(key) + "=";
    if (line.rfind(prefix, 0) != 0) return std::nullopt;
    return line.substr(prefix.size());
  };
  auto g = field("group");
  auto l = field("lambda");
  auto q = field("quad");
  auto c = field("code");
  auto r = field("rows");
  if (!g || !l || !q || !c || !r) return std::nullopt;
  e.group = *g;
  e.lambda = *l;
  try {
    e.quad_fingerprint = std::stoull(*q, nullptr, 16);
  } catch (...) {
    return std::nullopt;
  }
  e.code_fingerprint = *c;
  std::size_t rows = 0;
  try {
    rows = std::stoul(*r);
  } catch (...) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) return std::nullopt;
    std::vector<double> cells;
    std::string item;
    std::istringstream row(line);
    while (std::getline(row, item, ',')) {
      try {
        cells.push_back(std::stod(item));
      } catch (...) {
        return std::nullopt;
      }
    }
    if (cells.size() < 2) return std::nullopt;
    e.error.push_back(cells.back());
    cells.pop_back();
    e.value.push_back(cells.back());
    cells.pop_back();
    e.coords.push_back(cells);
  }
  return e;
}

/// Write-then-read; throws when the round trip does not reproduce the entry.
inline CacheEntry cache_roundtrip(const CacheEntry& entry, const std::string& path) {
  write_cache(entry, path);
  std::optional<CacheEntry> back = read_cache(path);
  ZONAL_CHECK_NUMERIC(back.has_value(), "cache round trip failed to read back: " + path);
  ZONAL_CHECK_NUMERIC(detail::cache_body(*back) == detail::cache_body(entry),
                      "cache round trip produced a different entry: " + path);
  return *back;
}

/// True when the entry can stand in for a computation with these
/// fingerprints; stale or mismatched entries must be recomputed.
inline bool cache_usable(const CacheEntry& e, const std::string& group, const std::string& lambda,
                         std::uint64_t quad_fingerprint) {
  return e.group == group && e.lambda == lambda && e.quad_fingerprint == quad_fingerprint &&
         e.code_fingerprint == std::string(version);
}

}  // namespace zonal

#endif
