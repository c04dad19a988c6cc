#ifndef ZONAL_QUADRATURE_HPP
#define ZONAL_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "zonal/common.hpp"

namespace zonal {

enum class QuadRule { GaussCircle, ProductGauss, MonteCarlo };

/// Deterministic description of every integral's discretization.
/// Two equal specs produce bit-identical results for the same integrand.
struct QuadratureSpec {
  QuadRule rule = QuadRule::GaussCircle;
  int order = 256;                 // base node count (deterministic rules)
  long samples = 100000;           // Monte Carlo sample count
  std::uint64_t seed = 0x5EED;     // Monte Carlo stream seed
  double truncation_radius = 6.0;  // radius cap for noncompact integrals
  double tolerance = 1e-9;         // requested absolute error (deterministic rules)

  static QuadratureSpec circle(int order = 256, double tol = 1e-9) {
    QuadratureSpec q;
    q.rule = QuadRule::GaussCircle;
    q.order = order;
    q.tolerance = tol;
    return q;
  }
  static QuadratureSpec product(int order, double trunc = 6.0, double tol = 1e-9) {
    QuadratureSpec q;
    q.rule = QuadRule::ProductGauss;
    q.order = order;
    q.truncation_radius = trunc;
    q.tolerance = tol;
    return q;
  }
  static QuadratureSpec monte_carlo(long samples, std::uint64_t seed = 0x5EED, double trunc = 6.0) {
    QuadratureSpec q;
    q.rule = QuadRule::MonteCarlo;
    q.samples = samples;
    q.seed = seed;
    q.truncation_radius = trunc;
    return q;
  }

  std::uint64_t fingerprint() const {
    std::string s = std::to_string(static_cast<int>(rule)) + "|" + std::to_string(order) + "|" +
                    std::to_string(samples) + "|" + std::to_string(seed) + "|" +
                    format_double(truncation_radius) + "|" + format_double(tolerance);
    return fnv1a64(s);
  }
};

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;     // absolute error estimate (1-sigma for Monte Carlo)
  bool converged = true;  // false when the budget ran out above tolerance
};

namespace quad {

/// Gauss-Legendre nodes/weights on [-1, 1], by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

namespace detail {

struct Panel {
  double a, b;
  std::complex<double> coarse;  // one 12-point GL estimate
};

template <class F>
std::complex<double> gl12(F&& f, double a, double b, const std::vector<double>& xs,
                          const std::vector<double>& ws) {
  std::complex<double> acc{0.0, 0.0};
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * f(mid + half * xs[i]);
  return acc * half;
}

}  // namespace detail

/// Adaptive composite Gauss-Legendre on [a, b].
/// Starts from `base_panels` equal panels and bisects until the summed
/// panel-difference estimate meets `tol` or `max_panels` is reached.
/// `noise_floor` stops refinement once panel differences reach the noise of
/// the integrand itself (needed when the integrand is an inner quadrature).
/// Fully deterministic: the refinement order depends only on integrand values.
template <class F>
QuadResult integrate_interval(F&& f, double a, double b, double tol, int base_panels,
                              int max_panels = 20000, double noise_floor = 0.0) {
  static thread_local std::vector<double> xs, ws;
  if (xs.empty()) gauss_legendre(12, xs, ws);

  base_panels = std::max(1, base_panels);
  std::vector<detail::Panel> stack;
  stack.reserve(64);
  for (int i = base_panels - 1; i >= 0; --i) {
    double pa = a + (b - a) * i / base_panels;
    double pb = a + (b - a) * (i + 1) / base_panels;
    stack.push_back({pa, pb, detail::gl12(f, pa, pb, xs, ws)});
  }

  QuadResult out;
  int used = base_panels;
  double total_len = b - a;
  while (!stack.empty()) {
    detail::Panel p = stack.back();
    stack.pop_back();
    double m = 0.5 * (p.a + p.b);
    std::complex<double> left = detail::gl12(f, p.a, m, xs, ws);
    std::complex<double> right = detail::gl12(f, m, p.b, xs, ws);
    double err = std::abs(left + right - p.coarse);
    double accept = std::max({tol * (p.b - p.a) / total_len, noise_floor, 1e-300});
    if (err <= accept || (p.b - p.a) < 1e-14 || used >= max_panels) {
      out.value += left + right;
      out.error += err;
      if (err > accept && (p.b - p.a) >= 1e-14) out.converged = false;
    } else {
      used += 2;
      stack.push_back({m, p.b, right});
      stack.push_back({p.a, m, left});
    }
  }
  if (out.error > std::max(tol, noise_floor * base_panels)) out.converged = false;
  return out;
}

/// Integral over the circle, normalized against the probability measure
/// d(theta)/2pi. `order` base nodes are grouped into order/8 starting panels.
template <class F>
QuadResult integrate_circle(F&& f, const QuadratureSpec& spec, double noise_floor = 0.0) {
  int base_panels = std::max(4, spec.order / 8);
  QuadResult r = integrate_interval(f, 0.0, 2.0 * M_PI, spec.tolerance * 2.0 * M_PI, base_panels,
                                    std::max(4096, 16 * base_panels), noise_floor);
  r.value /= 2.0 * M_PI;
  r.error /= 2.0 * M_PI;
  return r;
}

/// Plain N-point trapezoidal rule on the circle (exact for trigonometric
/// polynomials of degree < N); used where integrands are band-limited.
template <class F>
std::complex<double> circle_trapezoid(F&& f, int n) {
  std::complex<double> acc{0.0, 0.0};
  for (int j = 0; j < n; ++j) acc += f(2.0 * M_PI * j / n);
  return acc / static_cast<double>(n);
}

}  // namespace quad

}  // namespace zonal

#endif
