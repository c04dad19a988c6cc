#ifndef ZONAL_PRINCIPAL_SERIES_HPP
#define ZONAL_PRINCIPAL_SERIES_HPP

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "zonal/common.hpp"
#include "zonal/group.hpp"
#include "zonal/quadrature.hpp"
#include "zonal/rms.hpp"
#include "zonal/spherical.hpp"

namespace zonal {

/// Finite Fourier expansion over K = SO(2) in even modes only: functions on
/// the circle invariant under the half-turn shift, the compact-picture home
/// of the spherical principal series.
struct FourierVector {
  int n_max = 64;               // even truncation degree
  std::vector<Complex> c;      // modes -n_max, -n_max+2, ..., n_max

  static FourierVector zero(int n_max = 64) {
    ZONAL_REQUIRE(n_max >= 0 && n_max % 2 == 0, "n_max must be even and nonnegative");
    FourierVector v;
    v.n_max = n_max;
    v.c.assign(static_cast<std::size_t>(n_max + 1), Complex{0.0, 0.0});
    return v;
  }
  static FourierVector basis(int mode, int n_max = 64) {
    FourierVector v = zero(n_max);
    v.at_mode(mode) = Complex{1.0, 0.0};
    return v;
  }

  int num_modes() const { return n_max + 1; }
  int mode_at(int i) const { return -n_max + 2 * i; }
  int index_of(int mode) const {
    ZONAL_REQUIRE(mode % 2 == 0 && std::abs(mode) <= n_max, "mode must be even, |mode| <= n_max");
    return (mode + n_max) / 2;
  }
  Complex coef(int mode) const {
    if (mode % 2 != 0 || std::abs(mode) > n_max) return {0.0, 0.0};
    return c[static_cast<std::size_t>((mode + n_max) / 2)];
  }
  Complex& at_mode(int mode) { return c[static_cast<std::size_t>(index_of(mode))]; }

  double norm() const {
    double s = 0.0;
    for (const Complex& z : c) s += std::norm(z);
    return std::sqrt(s);
  }
  Complex inner(const FourierVector& other) const {
    Complex s{0.0, 0.0};
    for (int i = 0; i < num_modes(); ++i) s += coef(mode_at(i)) * std::conj(other.coef(mode_at(i)));
    return s;
  }
  std::vector<int> modes() const {
    std::vector<int> out;
    for (int i = 0; i < num_modes(); ++i) out.push_back(mode_at(i));
    return out;
  }
};

/// Tempered spherical principal-series parameter, in the same units as the
/// half-sum of positive roots (the spectral parameter is i nu rho).
struct RepParam {
  double nu = 1.0;
};

namespace detail {

// Exponent sign of the compact-picture weight. -1 is the calibrated
// convention: it is the one that makes the family unitary and locks the
// e_0 diagonal coefficient to the spherical function (see
// verify_rep_sign_convention).
inline constexpr int rep_exponent_sign = -1;

/// Fourier coefficients, at the requested output modes, of
/// theta |-> e^{sign (i nu + 1) s(theta)} xi(kappa(theta)) for x in SL(2,R),
/// where s and kappa are the Iwasawa data of x^{-1} k(theta).
/// The grid doubles until the requested modes are stable.
template <int Sign>
std::vector<Complex> rep_modes_signed(RepParam p, const GroupElement& x, const FourierVector& xi,
                                      const std::vector<int>& out_modes, double tol,
                                      double* grid_error, bool* grid_converged) {
  ZONAL_REQUIRE(x.n() == 2, "the principal series is realized on SL(2,R)");
  for (int m : out_modes) ZONAL_REQUIRE(m % 2 == 0, "output modes must be even");
  const double a = x.m(1, 1), b = -x.m(0, 1), c = -x.m(1, 0), d = x.m(0, 0);  // x^{-1}

  // Collect the nonzero input modes once.
  std::vector<std::pair<int, Complex>> in_modes;
  for (int i = 0; i < xi.num_modes(); ++i) {
    const Complex z = xi.coef(xi.mode_at(i));
    if (z != Complex{0.0, 0.0}) in_modes.emplace_back(xi.mode_at(i), z);
  }

  const double stab_tol = std::max(1e-13, tol) * std::max(1.0, xi.norm());
  std::vector<Complex> prev, cur;
  double diff = 0.0;
  int q = 1024;
  const int q_cap = 1 << 18;
  for (;; q *= 2) {
    cur.assign(out_modes.size(), Complex{0.0, 0.0});
    for (int j = 0; j < q; ++j) {
      const double th = 2.0 * M_PI * j / q;
      const double x0 = a * std::cos(th) + b * std::sin(th);
      const double x1 = c * std::cos(th) + d * std::sin(th);
      const double s = std::log(std::hypot(x0, x1));
      const double kappa = std::atan2(x1, x0);
      Complex val = std::exp(Complex(Sign * s, Sign * p.nu * s));
      Complex xv{0.0, 0.0};
      for (const auto& [mode, coef] : in_modes) xv += coef * std::exp(Complex(0.0, mode * kappa));
      val *= xv;
      for (std::size_t k = 0; k < out_modes.size(); ++k)
        cur[k] += val * std::exp(Complex(0.0, -out_modes[k] * th));
    }
    for (Complex& z : cur) z /= static_cast<double>(q);
    if (!prev.empty()) {
      diff = 0.0;
      for (std::size_t k = 0; k < cur.size(); ++k) diff = std::max(diff, std::abs(cur[k] - prev[k]));
      if (diff <= stab_tol || q >= q_cap) break;
    }
    prev = cur;
  }
  if (grid_error) *grid_error = diff;
  if (grid_converged) *grid_converged = diff <= stab_tol;
  return cur;
}

}  // namespace detail

struct RepApplied {
  FourierVector vec;
  double truncation_error = 0.0;  // norm lost above n_max plus grid instability
  bool converged = true;          // false: increase n_max (or the grid budget)
};

/// (pi_nu(x) xi)(k) = e^{-(i nu rho + rho)(H(x^{-1}k))} xi(kappa(x^{-1}k)),
/// re-projected to modes <= n_max. Unitary within the truncation error for
/// real nu; the norm deficit against the input is reported and flagged when
/// above the spec tolerance.
inline RepApplied rep_apply(RepParam p, const GroupElement& x, const FourierVector& xi,
                            const QuadratureSpec& quad) {
  RepApplied out;
  out.vec = FourierVector::zero(xi.n_max);
  double grid_err = 0.0;
  bool grid_ok = true;
  std::vector<Complex> modes = detail::rep_modes_signed<detail::rep_exponent_sign>(
      p, x, xi, xi.modes(), quad.tolerance * 1e-3, &grid_err, &grid_ok);
  for (int i = 0; i < out.vec.num_modes(); ++i) out.vec.c[static_cast<std::size_t>(i)] = modes[static_cast<std::size_t>(i)];
  // unitarity deficit of the truncated image (the family is unitary for
  // real nu, so norm loss is exactly the mass pushed above n_max)
  out.truncation_error = std::abs(out.vec.norm() - xi.norm()) + grid_err;
  out.converged = grid_ok && out.truncation_error <= std::max(quad.tolerance, 1e-12) *
                                                          std::max(1.0, xi.norm());
  return out;
}

struct CoefValue {
  Complex value{0.0, 0.0};
  double error = 0.0;
  bool converged = true;
};

/// <pi_nu(x) xi, eta> in the mode inner product. Exact up to grid error:
/// only the (finitely many) modes of eta are projected, so there is no
/// truncation loss.
inline CoefValue matrix_coefficient(RepParam p, const GroupElement& x, const FourierVector& xi,
                                    const FourierVector& eta, const QuadratureSpec& quad) {
  std::vector<int> modes;
  std::vector<Complex> eta_coefs;
  for (int i = 0; i < eta.num_modes(); ++i) {
    const Complex z = eta.coef(eta.mode_at(i));
    if (z != Complex{0.0, 0.0}) {
      modes.push_back(eta.mode_at(i));
      eta_coefs.push_back(z);
    }
  }
  CoefValue out;
  if (modes.empty()) return out;
  double grid_err = 0.0;
  bool grid_ok = true;
  std::vector<Complex> proj = detail::rep_modes_signed<detail::rep_exponent_sign>(
      p, x, xi, modes, quad.tolerance * 1e-2, &grid_err, &grid_ok);
  for (std::size_t k = 0; k < modes.size(); ++k) out.value += proj[k] * std::conj(eta_coefs[k]);
  out.error = grid_err * static_cast<double>(modes.size());
  out.converged = grid_ok;
  return out;
}

struct ThmBRow {
  double t = 0.0;
  int m = 0, n = 0;
  int ki = 0, kj = 0;
  double coef_abs = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - coef_abs (nonnegative when the estimate holds)
  bool ok = true;
};

struct ThmBReport {
  std::vector<ThmBRow> rows;
  double worst_margin = 0.0;
  bool all_ok = true;
};

/// K-finite pointwise bound with unit constant: for single even modes the
/// K-orbit spans are one-dimensional, so
/// |<pi_nu(k a_t k') e_m, e_n>| <= phi_0(a_t) across the K x K grid.
inline ThmBReport thmB_kfinite_bound_report(const SLGroup& g, RepParam p,
                                            const std::vector<std::pair<int, int>>& mode_pairs,
                                            const std::vector<double>& t_grid, int k_grid,
                                            double tol) {
  ZONAL_REQUIRE(g.n() == 2, "the principal series is realized on SL(2,R)");
  QuadratureSpec tight = QuadratureSpec::circle(256, 1e-11);
  ThmBReport rep;
  bool first = true;
  for (double t : t_grid) {
    const double bound = phi(g, SpectralParam::real(Vec::Zero(1)), g.a(t), tight).real();
    for (const auto& [m, n] : mode_pairs) {
      FourierVector em = FourierVector::basis(m, std::max(std::abs(m), std::abs(n)));
      FourierVector en = FourierVector::basis(n, std::max(std::abs(m), std::abs(n)));
      for (int ki = 0; ki < k_grid; ++ki) {
        for (int kj = 0; kj < k_grid; ++kj) {
          const double th1 = 2.0 * M_PI * ki / k_grid;
          const double th2 = 2.0 * M_PI * kj / k_grid;
          GroupElement x{g.rotation(th1).m * g.a(t).m * g.rotation(th2).m};
          CoefValue cv = matrix_coefficient(p, x, em, en, tight);
          ThmBRow row;
          row.t = t;
          row.m = m;
          row.n = n;
          row.ki = ki;
          row.kj = kj;
          row.coef_abs = std::abs(cv.value);
          row.bound = (1.0 + tol) * bound + cv.error + 1e-11;
          row.margin = row.bound - row.coef_abs;
          row.ok = row.margin >= 0.0;
          rep.all_ok = rep.all_ok && row.ok;
          if (first || row.margin < rep.worst_margin) rep.worst_margin = row.margin;
          first = false;
          rep.rows.push_back(row);
        }
      }
    }
  }
  return rep;
}

struct RmsBoundRow {
  double t = 0.0;
  double rms = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool ok = true;
};

struct RmsBoundReport {
  std::vector<RmsBoundRow> rows;
  double worst_margin = 0.0;
  bool all_ok = true;
};

/// Root-mean-square bound for generic finite-mode vectors:
/// A<pi_nu(.)xi,eta>(a_t) <= ||xi|| ||eta|| phi_0(a_t).
/// The coefficient is evaluated on the K a_t K slice through the diagonal
/// mode matrix M_nm = <pi(a_t) e_m, e_n>, and the average runs through the
/// generic rms_average quadrature.
inline RmsBoundReport rms_coeff_bound_report(const SLGroup& g, RepParam p, const FourierVector& xi,
                                             const FourierVector& eta,
                                             const std::vector<double>& t_grid,
                                             const QuadratureSpec& quad) {
  ZONAL_REQUIRE(g.n() == 2, "the principal series is realized on SL(2,R)");
  QuadratureSpec tight = QuadratureSpec::circle(256, 1e-11);
  RmsBoundReport rep;
  bool first = true;
  for (double t : t_grid) {
    // M[n][m] for all input/output modes, one projection pass per m
    std::vector<int> xi_modes, eta_modes;
    std::vector<Complex> xi_coefs, eta_coefs;
    for (int i = 0; i < xi.num_modes(); ++i)
      if (xi.coef(xi.mode_at(i)) != Complex{0.0, 0.0}) {
        xi_modes.push_back(xi.mode_at(i));
        xi_coefs.push_back(xi.coef(xi.mode_at(i)));
      }
    for (int i = 0; i < eta.num_modes(); ++i)
      if (eta.coef(eta.mode_at(i)) != Complex{0.0, 0.0}) {
        eta_modes.push_back(eta.mode_at(i));
        eta_coefs.push_back(eta.coef(eta.mode_at(i)));
      }
    std::vector<std::vector<Complex>> m_nm(xi_modes.size());
    double coef_err = 0.0;
    for (std::size_t mi = 0; mi < xi_modes.size(); ++mi) {
      double ge = 0.0;
      bool ok = true;
      m_nm[mi] = detail::rep_modes_signed<detail::rep_exponent_sign>(
          p, g.a(t), FourierVector::basis(xi_modes[mi], std::abs(xi_modes[mi])), eta_modes, 1e-11,
          &ge, &ok);
      coef_err = std::max(coef_err, ge);
    }
    // coefficient on the K a_t K slice: y = k(th1) a_t k(th2) gives
    // <pi(y) xi, eta> = sum_{m,n} xi_m conj(eta_n) e^{-i m th2} e^{-i n th1} M_nm
    auto u = [&](const GroupElement& y) -> Complex {
      const Kak2 kk = kak2(y.m);
      Complex acc{0.0, 0.0};
      for (std::size_t mi = 0; mi < xi_modes.size(); ++mi)
        for (std::size_t ni = 0; ni < eta_modes.size(); ++ni)
          acc += xi_coefs[mi] * std::conj(eta_coefs[ni]) * m_nm[mi][ni] *
                 std::exp(Complex(0.0, -xi_modes[mi] * kk.theta2 - eta_modes[ni] * kk.theta1));
      return acc;
    };
    RmsValue rms = rms_average(g, u, g.a(t), quad);
    RmsBoundRow row;
    row.t = t;
    row.rms = rms.value;
    row.bound = xi.norm() * eta.norm() * phi(g, SpectralParam::real(Vec::Zero(1)), g.a(t), tight).real() +
                3.0 * rms.error + 10.0 * coef_err + 1e-9;
    row.margin = row.bound - row.rms;
    row.ok = row.margin >= 0.0;
    rep.all_ok = rep.all_ok && row.ok;
    if (first || row.margin < rep.worst_margin) rep.worst_margin = row.margin;
    first = false;
    rep.rows.push_back(row);
  }
  return rep;
}

/// Startup self-test of the compact-picture weight sign. Exactly one sign
/// passes the unitarity test, and the same sign must lock the e_0 diagonal
/// coefficient to the spherical function; otherwise the build is rejected.
inline void verify_rep_sign_convention() {
  SLGroup g(2);
  const RootSystem& rs = g.root_system();
  QuadratureSpec q = QuadratureSpec::circle(256, 1e-8);
  RepParam p{1.0};

  auto passes = [&](auto&& modes_fn) -> bool {
    // unitarity at a_1 on e_0, n_max = 64
    FourierVector e0 = FourierVector::basis(0, 64);
    std::vector<Complex> out = modes_fn(p, g.a(1.0), e0, e0.modes());
    double norm2 = 0.0;
    for (const Complex& z : out) norm2 += std::norm(z);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) return false;
    // lock to the spherical function at imaginary parameter
    for (double t : {0.5, 1.0, 2.0}) {
      std::vector<Complex> d = modes_fn(p, g.a(t), FourierVector::basis(0, 0), std::vector<int>{0});
      SpectralParam il = SpectralParam::complex(Vec::Zero(1), p.nu * rs.rho);
      SphericalValue ph = phi(g, il, g.a(t), QuadratureSpec::circle(256, 1e-11));
      if (std::abs(d[0] - ph.value) > 1e-6) return false;
    }
    return true;
  };

  const bool minus = passes([&](RepParam pp, const GroupElement& x, const FourierVector& xi,
                                const std::vector<int>& m) {
    return detail::rep_modes_signed<-1>(pp, x, xi, m, 1e-11, nullptr, nullptr);
  });
  const bool plus = passes([&](RepParam pp, const GroupElement& x, const FourierVector& xi,
                               const std::vector<int>& m) {
    return detail::rep_modes_signed<+1>(pp, x, xi, m, 1e-11, nullptr, nullptr);
  });
  ZONAL_CHECK_NUMERIC(minus && !plus,
                      "principal-series weight sign failed calibration; build rejected");
}

}  // namespace zonal

#endif
