#ifndef ZONAL_SPECTRAL_HPP
#define ZONAL_SPECTRAL_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "zonal/common.hpp"
#include "zonal/linalg.hpp"
#include "zonal/root_system.hpp"
#include "zonal/weyl.hpp"

namespace zonal {

/// A point of the complexified weight space, stored as a real pair in the
/// same orthonormal frame as the roots.
struct SpectralParam {
  Vec re;
  Vec im;

  static SpectralParam real(Vec v) {
    SpectralParam p;
    p.im = Vec::Zero(v.size());
    p.re = std::move(v);
    return p;
  }
  static SpectralParam complex(Vec r, Vec i) {
    ZONAL_REQUIRE(r.size() == i.size(), "re/im size mismatch");
    SpectralParam p;
    p.re = std::move(r);
    p.im = std::move(i);
    return p;
  }

  bool is_real(double tol = 1e-12) const { return im.cwiseAbs().maxCoeff() <= tol; }
};

/// lambda lies in the closed dominant chamber: <lambda, alpha_i> >= -tol for
/// every simple root. (This implies nonnegative pairings with the dual basis.)
inline bool is_dominant(const RootSystem& rs, const Vec& lambda, double tol = 1e-10) {
  for (int i = 0; i < rs.num_simple(); ++i)
    if (rs.inner(lambda, rs.simple(i)) < -tol) return false;
  return true;
}

/// The orbit element in the closed dominant chamber. For wall parameters any
/// chamber element of the orbit is acceptable; they coincide there.
inline SpectralParam dominant_representative(const RootSystem& rs, const WeylGroup& w,
                                             const SpectralParam& lambda) {
  ZONAL_REQUIRE(lambda.is_real(1e-9), "dominant_representative expects a real parameter");
  const double scale = std::max(1.0, lambda.re.cwiseAbs().maxCoeff());
  for (const Mat& m : w.elements) {
    Vec img = m * lambda.re;
    if (is_dominant(rs, img, 1e-10 * scale)) return SpectralParam::real(img);
  }
  throw numeric_error("no dominant representative found; Weyl group incomplete?");
}

namespace detail {

/// Phase-1 simplex feasibility for lambda in conv(points): minimize the sum
/// of artificial variables for { sum c_p p = lambda, sum c_p = 1, c >= 0 }.
/// Returns the optimal phase-1 objective (0 iff feasible). Bland's rule.
inline double convex_membership_residual(const std::vector<Vec>& points, const Vec& target) {
  const int r = static_cast<int>(target.size());
  const int np = static_cast<int>(points.size());
  const int rows = r + 1;
  const int cols = np + rows;  // point coefficients + one artificial per row

  // tableau: rows x (cols + 1); last column is the RHS
  Mat t = Mat::Zero(rows, cols + 1);
  for (int i = 0; i < r; ++i) {
    for (int p = 0; p < np; ++p) t(i, p) = points[static_cast<std::size_t>(p)][i];
    t(i, cols) = target[i];
  }
  for (int p = 0; p < np; ++p) t(r, p) = 1.0;
  t(r, cols) = 1.0;
  for (int i = 0; i < rows; ++i) {
    if (t(i, cols) < 0.0) t.row(i) = -t.row(i);
    t(i, np + i) = 1.0;
  }

  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = np + i;

  // objective row w_j = z_j - c_j; w_rhs tracks the current objective value
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(cols + 1);
  for (int i = 0; i < rows; ++i) w += t.row(i);  // all basic costs are 1
  for (int j = np; j < cols; ++j) w[j] -= 1.0;

  const double eps = 1e-12;
  for (int iter = 0; iter < 20000; ++iter) {
    int enter = -1;
    for (int j = 0; j < np; ++j) {  // Bland: first improving column; artificials never re-enter
      if (w[j] > eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
      if (t(i, enter) > eps) {
        double ratio = t(i, cols) / t(i, enter);
        if (ratio < best - eps ||
            (ratio < best + eps && (leave < 0 || basis[static_cast<std::size_t>(i)] <
                                                     basis[static_cast<std::size_t>(leave)]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) break;  // unbounded cannot happen in phase 1
    t.row(leave) /= t(leave, enter);
    for (int i = 0; i < rows; ++i)
      if (i != leave && std::abs(t(i, enter)) > 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    w -= w[enter] * t.row(leave);
    w[enter] = 0.0;
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  return std::max(0.0, w[cols]);
}

}  // namespace detail

/// Brute-force hull membership: enumerate the orbit and decide the linear
/// feasibility problem over its points.
inline bool hull_contains_bruteforce(const RootSystem& rs, const WeylGroup& w, const Vec& lambda,
                                     const Vec& mu) {
  (void)rs;
  std::vector<Vec> orbit = weyl_orbit(w, mu);
  const double scale = std::max({1.0, lambda.cwiseAbs().maxCoeff(), mu.cwiseAbs().maxCoeff()});
  return detail::convex_membership_residual(orbit, lambda) <= 1e-9 * scale;
}

/// Fast path: reduce both parameters to dominant representatives and test
/// that mu+ - lambda+ is a nonnegative combination of simple roots.
inline bool hull_contains_fastpath(const RootSystem& rs, const WeylGroup& w, const Vec& lambda,
                                   const Vec& mu) {
  Vec lp = dominant_representative(rs, w, SpectralParam::real(lambda)).re;
  Vec mp = dominant_representative(rs, w, SpectralParam::real(mu)).re;
  const double scale = std::max({1.0, lambda.cwiseAbs().maxCoeff(), mu.cwiseAbs().maxCoeff()});
  const Vec diff = mp - lp;
  for (const Vec& h : dual_basis(rs))
    if (rs.inner(diff, h) < -1e-9 * scale) return false;
  return true;
}

/// Membership of lambda in conv(W mu), boundary inclusive at 1e-9.
/// Runs both routes and treats a disagreement as a defect.
inline bool in_convex_weyl_hull(const RootSystem& rs, const WeylGroup& w,
                                const SpectralParam& lambda, const SpectralParam& mu) {
  ZONAL_REQUIRE(lambda.is_real(1e-9) && mu.is_real(1e-9), "hull membership expects real parameters");
  const bool brute = hull_contains_bruteforce(rs, w, lambda.re, mu.re);
  const bool fast = hull_contains_fastpath(rs, w, lambda.re, mu.re);
  ZONAL_CHECK_NUMERIC(brute == fast, "convex-hull fast path disagrees with brute force");
  return brute;
}

/// Criterion for the spherical function to be hermitean: some Weyl element
/// sends Re(lambda) to -Re(lambda) while fixing Im(lambda).
inline bool is_hermitean_param(const RootSystem& rs, const WeylGroup& w, const SpectralParam& lambda) {
  (void)rs;
  const double scale = std::max({1.0, lambda.re.cwiseAbs().maxCoeff(), lambda.im.cwiseAbs().maxCoeff()});
  for (const Mat& m : w.elements) {
    if ((m * lambda.re + lambda.re).cwiseAbs().maxCoeff() <= 1e-10 * scale &&
        (m * lambda.im - lambda.im).cwiseAbs().maxCoeff() <= 1e-10 * scale)
      return true;
  }
  return false;
}

/// Coordinate-wise supremum in the dual-basis pairing: the unique minimal
/// dominant parameter whose orbit hull contains every element of the set.
inline SpectralParam minimal_dominating_param(const RootSystem& rs,
                                              const std::vector<SpectralParam>& set) {
  ZONAL_REQUIRE(!set.empty(), "minimal_dominating_param requires a nonempty set");
  const std::vector<Vec> hs = dual_basis(rs);
  const int r = rs.rank;
  Vec coeffs = Vec::Constant(r, -std::numeric_limits<double>::infinity());
  for (const SpectralParam& lam : set) {
    ZONAL_REQUIRE(lam.is_real(1e-9), "minimal_dominating_param expects real parameters");
    ZONAL_REQUIRE(is_dominant(rs, lam.re, 1e-9), "minimal_dominating_param expects dominant parameters");
    for (int j = 0; j < r; ++j)
      coeffs[j] = std::max(coeffs[j], rs.inner(lam.re, hs[static_cast<std::size_t>(j)]));
  }
  // <lambda*, H_j> = coeffs_j means lambda* = sum_j coeffs_j alpha_j
  Vec star = Vec::Zero(r);
  for (int j = 0; j < r; ++j) star += coeffs[j] * rs.simple(j);
  return SpectralParam::real(star);
}

struct CriticalExponent {
  double q = std::numeric_limits<double>::infinity();
  bool finite = false;  // false marks the "no finite L^q decay" regime
};

/// Integrability threshold of the spherical envelope against the Haar
/// density: q = max_j 2<rho,H_j> / <rho - lambda, H_j>. The envelope's
/// polynomial factor does not move the threshold: for q' > q the exponent
/// deficit is strictly negative on every chamber ray and beats any
/// polynomial, while for q' < q it is positive on some ray.
inline CriticalExponent critical_integrability_exponent(const RootSystem& rs,
                                                        const SpectralParam& lambda) {
  ZONAL_REQUIRE(lambda.is_real(1e-9), "critical exponent expects a real parameter");
  ZONAL_REQUIRE(is_dominant(rs, lambda.re, 1e-9), "critical exponent expects a dominant parameter");
  CriticalExponent out;
  double q = 0.0;
  for (const Vec& h : dual_basis(rs)) {
    const double rho_h = rs.inner(rs.rho, h);
    const double gap = rho_h - rs.inner(lambda.re, h);
    if (gap <= 1e-12 * std::max(1.0, rho_h)) return out;  // lambda reaches rho: +infinity marker
    q = std::max(q, 2.0 * rho_h / gap);
  }
  out.q = q;
  out.finite = true;
  return out;
}

}  // namespace zonal

#endif
