#ifndef ZONAL_ROOT_SYSTEM_HPP
#define ZONAL_ROOT_SYSTEM_HPP

#include <string>
#include <vector>

#include "zonal/common.hpp"
#include "zonal/linalg.hpp"

namespace zonal {

/// Restricted root system data in an orthonormal frame for the invariant
/// inner product, fixed at build time. Roots, rho and the dual basis all
/// live in that frame, so the Gram matrix is the identity and Weyl elements
/// are plain orthogonal matrices.
struct RootSystem {
  int rank = 0;
  std::vector<Vec> positive_roots;  // frame coordinates
  std::vector<int> multiplicities;  // aligned with positive_roots
  std::vector<int> simple_roots;    // indices into positive_roots
  Mat gram;                         // identity in the orthonormal frame
  Vec rho;                          // (1/2) sum of m_alpha * alpha
  std::string name;

  double inner(const Vec& x, const Vec& y) const { return x.dot(gram * y); }
  const Vec& simple(int i) const { return positive_roots[static_cast<std::size_t>(simple_roots[i])]; }
  int num_simple() const { return static_cast<int>(simple_roots.size()); }

  /// H lies in the closed dominant chamber of the frame (alpha_i(H) >= -tol).
  bool in_closed_chamber(const Vec& h, double tol = 1e-9) const {
    for (int i = 0; i < num_simple(); ++i)
      if (inner(simple(i), h) < -tol) return false;
    return true;
  }
};

namespace detail {

// Orthonormal basis of the sum-zero hyperplane of R^n (Helmert), as columns
// of an n x (n-1) matrix. Frame coordinates of a sum-zero vector v are B^T v.
inline Mat helmert_frame(int n) {
  Mat b = Mat::Zero(n, n - 1);
  for (int k = 1; k < n; ++k) {
    double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) b(i, k - 1) = 1.0 / norm;
    b(k, k - 1) = -static_cast<double>(k) / norm;
  }
  return b;
}

inline RootSystem build_sl(int n, const std::string& name) {
  ZONAL_REQUIRE(n >= 2, "sl(n,R) requires n >= 2");
  RootSystem rs;
  rs.rank = n - 1;
  rs.name = name;
  rs.gram = Mat::Identity(n - 1, n - 1);
  Mat frame = helmert_frame(n);
  // positive roots e_i - e_j for i < j, lexicographic; alpha_i = e_i - e_{i+1} simple
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vec a = Vec::Zero(n);
      a[i] = 1.0;
      a[j] = -1.0;
      rs.positive_roots.push_back(frame.transpose() * a);
      rs.multiplicities.push_back(1);
      if (j == i + 1) rs.simple_roots.push_back(static_cast<int>(rs.positive_roots.size()) - 1);
    }
  }
  rs.rho = Vec::Zero(n - 1);
  for (std::size_t k = 0; k < rs.positive_roots.size(); ++k)
    rs.rho += 0.5 * rs.multiplicities[k] * rs.positive_roots[k];
  return rs;
}

inline RootSystem build_b2() {
  RootSystem rs;
  rs.rank = 2;
  rs.name = "B2";
  rs.gram = Mat::Identity(2, 2);
  auto push = [&rs](double x, double y) {
    Vec a(2);
    a << x, y;
    rs.positive_roots.push_back(a);
    rs.multiplicities.push_back(1);
  };
  push(1.0, -1.0);  // long simple
  push(0.0, 1.0);   // short simple
  push(1.0, 0.0);
  push(1.0, 1.0);
  rs.simple_roots = {0, 1};
  rs.rho = Vec::Zero(2);
  for (std::size_t k = 0; k < rs.positive_roots.size(); ++k)
    rs.rho += 0.5 * rs.multiplicities[k] * rs.positive_roots[k];
  return rs;
}

}  // namespace detail

/// Recognized identifiers: "sl(n,R)" for n >= 2, and the abstract labels
/// "A1", "A2", "B2" (all multiplicities 1). Same input, bit-identical output.
inline RootSystem build_root_system(const std::string& spec) {
  if (spec == "A1") return detail::build_sl(2, "A1");
  if (spec == "A2") return detail::build_sl(3, "A2");
  if (spec == "B2") return detail::build_b2();
  if (spec.rfind("sl(", 0) == 0 && spec.size() >= 7 && spec.substr(spec.size() - 3) == ",R)") {
    const std::string digits = spec.substr(3, spec.size() - 6);
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
      int n = std::stoi(digits);
      ZONAL_REQUIRE(n >= 2 && n <= 16, "sl(n,R) supported for 2 <= n <= 16");
      return detail::build_sl(n, spec);
    }
  }
  throw invalid_input("unknown root system identifier '" + spec +
                      "'; supported: sl(n,R) for n >= 2, A1, A2, B2");
}

/// Basis {H_j} of the frame with <alpha_i, H_j> = delta_ij over the simple
/// roots. The closed dominant chamber is the nonnegative span of the H_j.
inline std::vector<Vec> dual_basis(const RootSystem& rs) {
  const int r = rs.rank;
  ZONAL_REQUIRE(rs.num_simple() == r, "dual basis needs exactly rank simple roots");
  Mat s(r, r);
  for (int i = 0; i < r; ++i) s.row(i) = rs.simple(i).transpose() * rs.gram;
  Eigen::FullPivLU<Mat> lu(s);
  ZONAL_CHECK_NUMERIC(lu.isInvertible(), "simple-root Gram matrix is singular");
  Mat inv = lu.inverse();
  std::vector<Vec> h(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) h[static_cast<std::size_t>(j)] = inv.col(j);
  return h;
}

}  // namespace zonal

#endif
