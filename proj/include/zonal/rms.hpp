#ifndef ZONAL_RMS_HPP
#define ZONAL_RMS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "zonal/common.hpp"
#include "zonal/group.hpp"
#include "zonal/quadrature.hpp"
#include "zonal/spherical.hpp"
#include "zonal/test_function.hpp"

namespace zonal {

using GFunction = std::function<Complex(const GroupElement&)>;

struct RmsValue {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Root-mean-square average over left and right K-translates:
/// (iint_{KxK} |u(k x k')|^2 dk dk')^{1/2}.
/// n = 2 uses the product trapezoidal rule (exact once the order passes the
/// angular bandwidth, with a half-order comparison as the error estimate);
/// n >= 3 falls back to Monte Carlo pairs.
inline RmsValue rms_average(const SLGroup& g, const GFunction& u, const GroupElement& x,
                            const QuadratureSpec& quad) {
  RmsValue out;
  if (g.n() == 2 && quad.rule != QuadRule::MonteCarlo) {
    int q = std::max(16, quad.order);
    if (q % 2) ++q;
    std::vector<Mat> left(static_cast<std::size_t>(q)), right(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
      const double th = 2.0 * M_PI * i / q;
      left[static_cast<std::size_t>(i)] = g.rotation(th).m * x.m;
      right[static_cast<std::size_t>(i)] = g.rotation(th).m;
    }
    double full = 0.0, half = 0.0;
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) {
        const double v = std::norm(u(GroupElement{left[static_cast<std::size_t>(i)] *
                                                  right[static_cast<std::size_t>(j)]}));
        full += v;
        if (i % 2 == 0 && j % 2 == 0) half += v;
      }
    }
    full /= static_cast<double>(q) * q;
    half /= static_cast<double>(q / 2) * (q / 2);
    const double err2 = std::abs(full - half);
    out.value = std::sqrt(std::max(0.0, full));
    out.error = out.value > 0.0 ? 0.5 * err2 / std::max(out.value, 1e-150) : std::sqrt(err2);
    out.converged = err2 <= std::max(quad.tolerance, 1e-12) * std::max(1.0, full);
    return out;
  }
  RandomStream stream(quad.seed);
  const long n_samples = std::max(1L, quad.samples);
  double acc = 0.0, acc_sq = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    const Mat k1 = haar_sample_K(g.n(), stream);
    const Mat k2 = haar_sample_K(g.n(), stream);
    const double v = std::norm(u(GroupElement{k1 * x.m * k2}));
    acc += v;
    acc_sq += v * v;
  }
  const double mean = acc / n_samples;
  const double var = std::max(0.0, acc_sq / n_samples - mean * mean);
  const double sigma2 = std::sqrt(var / n_samples);
  out.value = std::sqrt(std::max(0.0, mean));
  out.error = out.value > std::sqrt(sigma2) ? 0.5 * sigma2 / out.value : std::sqrt(sigma2);
  return out;
}

inline GFunction as_gfunction(const TestFunction& f) {
  return [f](const GroupElement& x) { return f(x); };
}

/// Exact K x K mean square of a closed-form test function:
/// (A f)(x) = |profile(|H(x)|)| * angular_l2. Used as the fast path where the
/// operand is known to be in the family; rms_average is the generic route.
inline double rms_average_closed_form(const TestFunction& f, double cartan_radius_u) {
  return std::abs(f.profile()(cartan_radius_u)) * f.angular_l2();
}

struct ConvValue {
  Complex value{0.0, 0.0};
  double sigma = 0.0;  // 1-sigma Monte Carlo error
};

namespace detail {

// Importance sampler for the radial Haar measure on [0, t_max]:
// density proportional to sinh(2t); total frame mass sqrt2 (cosh 2 t_max - 1)/2.
struct RadialSampler {
  double t_max;
  double mass;

  explicit RadialSampler(double tm)
      : t_max(tm), mass(M_SQRT2 * 0.5 * (std::cosh(2.0 * tm) - 1.0)) {}

  double draw(RandomStream& s) const {
    const double u = s.uniform();
    return 0.5 * std::acosh(1.0 + u * (std::cosh(2.0 * t_max) - 1.0));
  }
};

}  // namespace detail

/// Convolution (f * h)(x) = int f(y) h(y^{-1} x) dy by Cartan-coordinate
/// Monte Carlo, importance-weighted by the radial Haar density and truncated
/// to the support of f. Outside the product support the result is exactly 0.
inline ConvValue convolve(const SLGroup& g, const TestFunction& f, const TestFunction& h,
                          const GroupElement& x, const QuadratureSpec& mc) {
  ZONAL_REQUIRE(g.n() == 2, "convolution is realized on SL(2,R)");
  ConvValue out;
  const Kak2 kx = kak2(x.m);
  if (M_SQRT2 * kx.t > f.support_radius() + h.support_radius()) return out;

  const detail::RadialSampler sampler(f.support_radius() / M_SQRT2);
  RandomStream stream(mc.seed);
  const long n_samples = std::max(1L, mc.samples);
  Complex acc{0.0, 0.0};
  double acc_sq = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    const double t = sampler.draw(stream);
    const double a1 = stream.uniform(0.0, 2.0 * M_PI);
    const double a2 = stream.uniform(0.0, 2.0 * M_PI);
    const Complex fv = f.eval_cartan(t, a1, a2);
    // y^{-1} x = k(-a2) a(-t) k(-a1) x
    const Mat yinv = g.rotation(-a2).m * g.a(-t).m * g.rotation(-a1).m * x.m;
    const Complex z = fv * h(GroupElement{yinv});
    acc += z;
    acc_sq += std::norm(z);
  }
  const Complex mean = acc / static_cast<double>(n_samples);
  const double var = std::max(0.0, acc_sq / n_samples - std::norm(mean));
  out.value = sampler.mass * mean;
  out.sigma = sampler.mass * std::sqrt(var / n_samples);
  return out;
}

struct NormValue {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// ||f||_(lambda) = int_G (A f)(x) phi_lambda(x) dx in Cartan coordinates
/// with the radial Haar density. Finite for compact support regardless of
/// the growth regime of phi_lambda.
inline NormValue lambda_norm(const SLGroup& g, const TestFunction& f, const SpectralParam& lambda,
                             const QuadratureSpec& quad) {
  ZONAL_REQUIRE(g.n() == 2, "lambda_norm is realized on SL(2,R)");
  ZONAL_REQUIRE(lambda.is_real(1e-9), "lambda_norm expects a real parameter");
  const double t_max = f.support_radius() / M_SQRT2;
  QuadratureSpec phi_quad = QuadratureSpec::circle(std::max(64, quad.order), quad.tolerance * 1e-2);
  const double al2 = f.angular_l2();
  bool phis_ok = true;
  auto integrand = [&](double t) -> Complex {
    const double a = std::abs(f.profile()(M_SQRT2 * t)) * al2;
    if (a == 0.0) return {0.0, 0.0};
    SphericalValue p = phi(g, lambda, g.a(t), phi_quad);
    phis_ok = phis_ok && p.converged;
    return a * p.real() * M_SQRT2 * std::sinh(2.0 * t);
  };
  QuadResult r = quad::integrate_interval(integrand, 0.0, t_max, quad.tolerance, 24, 2048,
                                          3.0 * phi_quad.tolerance);
  NormValue out;
  out.value = r.value.real();
  out.error = r.error + 1e-11 * (1.0 + std::abs(out.value));
  out.converged = r.converged && phis_ok;
  return out;
}

/// Norm of a generic evaluatable function with compactly supported radius;
/// the K x K average runs through rms_average.
inline NormValue lambda_norm_fn(const SLGroup& g, const GFunction& u, double support_radius,
                                const SpectralParam& lambda, const QuadratureSpec& quad) {
  ZONAL_REQUIRE(g.n() == 2, "lambda_norm is realized on SL(2,R)");
  const double t_max = support_radius / M_SQRT2;
  QuadratureSpec phi_quad = QuadratureSpec::circle(std::max(64, quad.order), quad.tolerance * 1e-2);
  QuadratureSpec rms_quad = QuadratureSpec::circle(std::max(64, quad.order), quad.tolerance);
  bool parts_ok = true;
  double rms_err_max = 0.0;
  auto integrand = [&](double t) -> Complex {
    RmsValue a = rms_average(g, u, g.a(t), rms_quad);
    parts_ok = parts_ok && a.converged;
    rms_err_max = std::max(rms_err_max, a.error);
    if (a.value == 0.0) return {0.0, 0.0};
    SphericalValue p = phi(g, lambda, g.a(t), phi_quad);
    parts_ok = parts_ok && p.converged;
    return a.value * p.real() * M_SQRT2 * std::sinh(2.0 * t);
  };
  QuadResult r = quad::integrate_interval(integrand, 0.0, t_max, quad.tolerance, 24, 2048,
                                          3.0 * phi_quad.tolerance);
  NormValue out;
  out.value = r.value.real();
  out.error = r.error + rms_err_max * M_SQRT2 * 0.5 * (std::cosh(2.0 * t_max) - 1.0) +
              1e-11 * (1.0 + std::abs(out.value));
  out.converged = r.converged && parts_ok;
  return out;
}

struct SubmultRow {
  int point_id = 0;
  double lhs = 0.0;    // A(f*h)(x)
  double rhs = 0.0;    // (A f * A h)(x)
  double sigma = 0.0;  // combined 1-sigma + deterministic allowance
  double margin = 0.0; // rhs + 3 sigma - lhs
  bool ok = true;
};

struct SubmultReport {
  std::vector<SubmultRow> pointwise;
  double norm_lhs = 0.0, norm_rhs = 0.0, norm_sigma = 0.0, norm_margin = 0.0;
  bool norm_ok = true;
  bool all_pointwise_ok = true;
};

namespace detail {

// Mode-resolved estimate of A(f*h)(x): by left/right K-translation the
// convolution restricted to K x K sits in the same trigonometric band, so
// A(f*h)(x)^2 = sum_{m,n} |C_mn(x)|^2 with scalar integrals
// C_mn(x) = int f_m(y) h_n(y^{-1}x) dy. All modes share one sample set; the
// |C|^2 estimates subtract their own Monte Carlo variance to stay unbiased.
struct ConvRmsEstimate {
  double value = 0.0;
  double sigma = 0.0;
};

inline ConvRmsEstimate conv_rms_modes(const SLGroup& g, const TestFunction& f,
                                      const TestFunction& h, const GroupElement& x, long n_samples,
                                      RandomStream stream) {
  std::vector<int> f_modes, h_modes;
  for (const AngularTerm& t : f.angular())
    if (std::find(f_modes.begin(), f_modes.end(), t.m) == f_modes.end()) f_modes.push_back(t.m);
  for (const AngularTerm& t : h.angular())
    if (std::find(h_modes.begin(), h_modes.end(), t.n) == h_modes.end()) h_modes.push_back(t.n);
  const std::size_t nf = f_modes.size(), nh = h_modes.size();

  const RadialSampler sampler(f.support_radius() / M_SQRT2);
  std::vector<Complex> acc(nf * nh, Complex{0.0, 0.0});
  std::vector<double> acc_sq(nf * nh, 0.0);
  std::vector<Complex> fm(nf), hn(nh);
  for (long s = 0; s < n_samples; ++s) {
    const double t = sampler.draw(stream);
    const double a1 = stream.uniform(0.0, 2.0 * M_PI);
    const double a2 = stream.uniform(0.0, 2.0 * M_PI);
    const double pf = f.profile()(M_SQRT2 * t);
    const Mat yinv = g.rotation(-a2).m * g.a(-t).m * g.rotation(-a1).m * x.m;
    const Kak2 kz = kak2(yinv);
    const double ph = h.profile()(M_SQRT2 * kz.t);
    for (std::size_t i = 0; i < nf; ++i) {
      Complex v{0.0, 0.0};
      if (pf != 0.0)
        for (const AngularTerm& term : f.angular())
          if (term.m == f_modes[i])
            v += term.coef * std::exp(Complex(0.0, f_modes[i] * a1 + term.n * a2));
      fm[i] = pf * v;
    }
    for (std::size_t j = 0; j < nh; ++j) {
      Complex v{0.0, 0.0};
      if (ph != 0.0)
        for (const AngularTerm& term : h.angular())
          if (term.n == h_modes[j])
            v += term.coef * std::exp(Complex(0.0, term.m * kz.theta1 + h_modes[j] * kz.theta2));
      hn[j] = ph * v;
    }
    for (std::size_t i = 0; i < nf; ++i)
      for (std::size_t j = 0; j < nh; ++j) {
        const Complex z = fm[i] * hn[j];
        acc[i * nh + j] += z;
        acc_sq[i * nh + j] += std::norm(z);
      }
  }

  double a2_total = 0.0, a2_sigma_sq = 0.0;
  for (std::size_t k = 0; k < nf * nh; ++k) {
    const Complex mean = acc[k] / static_cast<double>(n_samples);
    const double var = std::max(0.0, acc_sq[k] / n_samples - std::norm(mean));
    const double c_abs2 = std::norm(sampler.mass * mean);
    const double c_var = sampler.mass * sampler.mass * var / n_samples;  // Var of C estimate
    a2_total += std::max(0.0, c_abs2 - c_var);
    a2_sigma_sq += 4.0 * c_abs2 * c_var + 2.0 * c_var * c_var;
  }
  ConvRmsEstimate out;
  out.value = std::sqrt(a2_total);
  const double sigma_a2 = std::sqrt(a2_sigma_sq);
  out.sigma = out.value > std::sqrt(sigma_a2) ? 0.5 * sigma_a2 / out.value : std::sqrt(sigma_a2);
  return out;
}

// (A f * A h)(x): the averages are radial, so the right K-factor integrates
// out and the integral is a deterministic radius x angle quadrature.
inline QuadResult conv_of_averages(const SLGroup& g, const TestFunction& f, const TestFunction& h,
                                   const GroupElement& x, double tol) {
  const double scale = f.angular_l2() * h.angular_l2();
  const double t_max = f.support_radius() / M_SQRT2;
  auto outer = [&](double t) -> Complex {
    const double pf = std::abs(f.profile()(M_SQRT2 * t));
    if (pf == 0.0) return {0.0, 0.0};
    const Mat at_inv = g.a(-t).m;
    auto inner = [&](double th) -> Complex {
      const Mat z = at_inv * g.rotation(th).m * x.m;
      return std::abs(h.profile()(M_SQRT2 * kak2(z).t));
    };
    QuadResult r = quad::integrate_interval(inner, 0.0, 2.0 * M_PI, tol, 16, 2048);
    return pf * (r.value / (2.0 * M_PI)) * M_SQRT2 * std::sinh(2.0 * t);
  };
  QuadResult r = quad::integrate_interval(outer, 0.0, t_max, tol, 24, 2048, 2.0 * tol);
  r.value *= scale;
  r.error *= scale;
  r.error += 1e-10 * (1.0 + std::abs(r.value));
  return r;
}

}  // namespace detail

/// Verifies A(f*h) <= A f * A h pointwise at sampled group elements and
/// ||f*h||_(lambda) <= ||f||_(lambda) ||h||_(lambda), each within a 3-sigma
/// Monte Carlo allowance. Violations beyond the allowance are recorded, not
/// thrown: they are test failures.
inline SubmultReport submultiplicativity_report(const SLGroup& g, const TestFunction& f,
                                                const TestFunction& h, const SpectralParam& lambda,
                                                int n_points, const QuadratureSpec& mc) {
  ZONAL_REQUIRE(g.n() == 2, "submultiplicativity report is realized on SL(2,R)");
  ZONAL_REQUIRE(lambda.is_real(1e-9) && is_dominant(g.root_system(), lambda.re, 1e-9),
                "submultiplicativity expects a real dominant parameter");
  SubmultReport rep;
  RandomStream point_stream(mc.seed ^ 0xabcdef12345ull);
  const double reach = f.support_radius() + h.support_radius();
  for (int i = 0; i < n_points; ++i) {
    GroupElement x = g.random_element(0.95 * reach * point_stream.uniform(), point_stream);
    detail::ConvRmsEstimate lhs = detail::conv_rms_modes(
        g, f, h, x, mc.samples, RandomStream(mc.seed).substream(static_cast<std::uint64_t>(i)));
    QuadResult rhs = detail::conv_of_averages(g, f, h, x, 1e-8);
    SubmultRow row;
    row.point_id = i;
    row.lhs = lhs.value;
    row.rhs = rhs.value.real();
    row.sigma = lhs.sigma + rhs.error;
    row.margin = row.rhs + 3.0 * row.sigma - row.lhs;
    row.ok = row.margin >= 0.0;
    rep.all_pointwise_ok = rep.all_pointwise_ok && row.ok;
    rep.pointwise.push_back(row);
  }

  // norm inequality at the same sample budget
  {
    const double s_max = (f.support_radius() + h.support_radius()) / M_SQRT2;
    std::vector<double> xs, ws;
    quad::gauss_legendre(32, xs, ws);
    QuadratureSpec phi_quad = QuadratureSpec::circle(128, 1e-11);
    double val32 = 0.0, sig_sq = 0.0, val16 = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      const int order = pass == 0 ? 32 : 16;
      quad::gauss_legendre(order, xs, ws);
      double acc = 0.0;
      for (int i = 0; i < order; ++i) {
        const double s = 0.5 * (xs[static_cast<std::size_t>(i)] + 1.0) * s_max;
        const double w = 0.5 * s_max * ws[static_cast<std::size_t>(i)];
        detail::ConvRmsEstimate a = detail::conv_rms_modes(
            g, f, h, g.a(s), mc.samples,
            RandomStream(mc.seed ^ 0x777ull).substream(static_cast<std::uint64_t>(order * 100 + i)));
        const double pv = phi(g, lambda, g.a(s), phi_quad).real();
        const double weight = w * pv * M_SQRT2 * std::sinh(2.0 * s);
        acc += weight * a.value;
        if (pass == 0) sig_sq += weight * weight * a.sigma * a.sigma;
      }
      (pass == 0 ? val32 : val16) = acc;
    }
    NormValue nf_ = lambda_norm(g, f, lambda, QuadratureSpec::circle(256, 1e-10));
    NormValue nh_ = lambda_norm(g, h, lambda, QuadratureSpec::circle(256, 1e-10));
    rep.norm_lhs = val32;
    rep.norm_rhs = nf_.value * nh_.value;
    rep.norm_sigma = std::sqrt(sig_sq) + std::abs(val32 - val16) +
                     nf_.error * nh_.value + nh_.error * nf_.value;
    rep.norm_margin = rep.norm_rhs + 3.0 * rep.norm_sigma - rep.norm_lhs;
    rep.norm_ok = rep.norm_margin >= 0.0;
  }
  return rep;
}

/// |(f * phi_lambda)(x) - (f * phi_lambda)(e) phi_lambda(x)| for K-bi-invariant
/// f: the eigenfunction identity of the spherical family. The convolution is
/// a radius x angle integral against the tabulated radial profile of phi.
inline ResidualValue eigenfunction_residual(const SLGroup& g, const TestFunction& f,
                                            const SpectralParam& lambda, const GroupElement& x,
                                            const QuadratureSpec& quad) {
  ZONAL_REQUIRE(g.n() == 2, "eigenfunction residual is realized on SL(2,R)");
  ZONAL_REQUIRE(f.k_bi_invariant(), "eigenfunction residual expects a K-bi-invariant function");
  QuadratureSpec phi_quad = QuadratureSpec::circle(std::max(64, quad.order), 1e-10);
  const double t_max = f.support_radius() / M_SQRT2;
  const double u_max = f.support_radius() + cartan_radius(x) + 1e-6;
  bool ok = true;
  detail::RadialTable table = detail::RadialTable::of_phi(g, lambda, u_max, phi_quad, &ok);

  // (f * phi)(z) = sqrt2 int dt sinh(2t) f(t) (1/2pi) int dth phi(a_{-t} k_th z):
  // fixed product rules at two resolutions give the value and its estimate
  static thread_local std::vector<double> gl_xs, gl_ws;
  if (gl_xs.empty()) quad::gauss_legendre(12, gl_xs, gl_ws);
  auto conv_at_res = [&](const GroupElement& z, int n_theta, int t_panels) -> Complex {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < n_theta; ++j) {
      const Mat r = g.rotation(2.0 * M_PI * j / n_theta).m * z.m;
      for (int pnl = 0; pnl < t_panels; ++pnl) {
        const double a = t_max * pnl / t_panels, b = t_max * (pnl + 1) / t_panels;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t q = 0; q < gl_xs.size(); ++q) {
          const double t = mid + half * gl_xs[q];
          const Complex ft = f.eval_cartan(t, 0.0, 0.0);
          if (ft == Complex{0.0, 0.0}) continue;
          const double e = std::exp(-t);
          // a(-t) * r, assembled inline
          Mat ar(2, 2);
          ar << e * r(0, 0), e * r(0, 1), r(1, 0) / e, r(1, 1) / e;
          acc += half * gl_ws[q] * ft * M_SQRT2 * std::sinh(2.0 * t) *
                 table(M_SQRT2 * kak2(ar).t);
        }
      }
    }
    return acc / static_cast<double>(n_theta);
  };
  double est_err = 0.0;
  auto conv_at = [&](const GroupElement& z) -> Complex {
    const int n_theta = std::max(128, quad.order / 2);
    const Complex lo = conv_at_res(z, n_theta, 6);
    const Complex hi = conv_at_res(z, 2 * n_theta, 12);
    est_err += std::abs(hi - lo);
    return hi;
  };

  const Complex conv_x = conv_at(x);
  const Complex conv_e = conv_at(g.identity());
  SphericalValue px = phi(g, lambda, x, phi_quad);
  ResidualValue out;
  out.residual = std::abs(conv_x - conv_e * px.value);
  out.error = est_err + 1e-7 + px.quad_error;
  out.converged = ok && px.converged && est_err < quad.tolerance * 10.0;
  return out;
}

}  // namespace zonal

#endif
