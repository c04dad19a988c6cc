#ifndef ZONAL_WEYL_HPP
#define ZONAL_WEYL_HPP

#include <vector>

#include "zonal/common.hpp"
#include "zonal/linalg.hpp"
#include "zonal/root_system.hpp"

namespace zonal {

/// Fully enumerated Weyl group, acting on frame coordinates by orthogonal
/// matrices. Enumeration is fine at desk scale (rank <= 3) and lets every
/// downstream question be answered by brute force.
struct WeylGroup {
  std::vector<Mat> elements;    // elements[0] is the identity
  std::vector<int> generators;  // indices of the simple reflections

  int order() const { return static_cast<int>(elements.size()); }
};

namespace detail {

inline Mat reflection_matrix(const RootSystem& rs, const Vec& alpha) {
  const double a2 = rs.inner(alpha, alpha);
  return Mat::Identity(rs.rank, rs.rank) - (2.0 / a2) * alpha * (alpha.transpose() * rs.gram);
}

inline int find_element(const std::vector<Mat>& elems, const Mat& m, double tol) {
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (approx(elems[i], m, tol)) return static_cast<int>(i);
  return -1;
}

}  // namespace detail

/// Closure of the simple reflections under composition.
inline WeylGroup generate_weyl(const RootSystem& rs) {
  constexpr int hard_cap = 1000000;
  const double tol = 1e-9;
  WeylGroup w;
  w.elements.push_back(Mat::Identity(rs.rank, rs.rank));

  std::vector<Mat> gens;
  for (int i = 0; i < rs.num_simple(); ++i) gens.push_back(detail::reflection_matrix(rs, rs.simple(i)));
  for (const Mat& g : gens) {
    int idx = detail::find_element(w.elements, g, tol);
    if (idx < 0) {
      w.elements.push_back(g);
      idx = w.order() - 1;
    }
    w.generators.push_back(idx);
  }

  std::size_t frontier = 0;
  while (frontier < w.elements.size()) {
    Mat cur = w.elements[frontier++];
    for (const Mat& g : gens) {
      Mat cand = g * cur;
      if (detail::find_element(w.elements, cand, tol) < 0) {
        ZONAL_CHECK_NUMERIC(w.order() < hard_cap, "Weyl closure exceeded hard cap; malformed root data");
        w.elements.push_back(cand);
      }
    }
  }
  return w;
}

inline bool contains_minus_identity(const WeylGroup& w) {
  if (w.elements.empty()) return false;
  const Mat minus = -Mat::Identity(w.elements[0].rows(), w.elements[0].cols());
  return detail::find_element(w.elements, minus, 1e-10) >= 0;
}

/// Orbit of a frame vector, deduplicated within tol.
inline std::vector<Vec> weyl_orbit(const WeylGroup& w, const Vec& v, double tol = 1e-9) {
  std::vector<Vec> orbit;
  for (const Mat& m : w.elements) {
    Vec img = m * v;
    bool seen = false;
    for (const Vec& o : orbit)
      if (approx(o, img, tol)) {
        seen = true;
        break;
      }
    if (!seen) orbit.push_back(img);
  }
  return orbit;
}

}  // namespace zonal

#endif
