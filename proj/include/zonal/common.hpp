#ifndef ZONAL_COMMON_HPP
#define ZONAL_COMMON_HPP

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zonal {

inline constexpr std::string_view version = "0.1.0";

// Thrown when a caller violates a documented precondition.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot meet its numerical contract
// (ill-conditioned input, closure blow-up, failed self-calibration).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ZONAL_REQUIRE(cond, msg)          \
  do {                                    \
    if (!(cond)) throw ::zonal::invalid_input(msg); \
  } while (0)

#define ZONAL_CHECK_NUMERIC(cond, msg)    \
  do {                                    \
    if (!(cond)) throw ::zonal::numeric_error(msg); \
  } while (0)

// Shortest decimal form that round-trips a double exactly.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// FNV-1a, used for cache checksums and quadrature fingerprints.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace zonal

#endif
