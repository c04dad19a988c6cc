#ifndef ZONAL_TEST_FUNCTION_HPP
#define ZONAL_TEST_FUNCTION_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "zonal/common.hpp"
#include "zonal/group.hpp"

namespace zonal {

/// Compactly supported radial bump in closed form: amplitude * (1 - z^2)^s
/// with z = (u - center)/(support_radius - center), zero for |z| >= 1.
/// u is the Cartan radius |H| (frame norm). smoothness s >= 1 gives C^{s-1}.
struct BumpProfile {
  double support_radius = 1.0;
  double center = 0.0;
  int smoothness = 3;
  double amplitude = 1.0;

  double width() const { return support_radius - center; }
  double lower_edge() const { return std::max(0.0, center - width()); }

  double operator()(double u) const {
    const double z = (u - center) / width();
    if (std::abs(z) >= 1.0) return 0.0;
    return amplitude * std::pow(1.0 - z * z, smoothness);
  }
};

/// One term c * e^{i(m theta1 + n theta2)} of the trigonometric factor on
/// K x K. The Cartan M-ambiguity shifts both angles by pi, so m + n must be
/// even for the product to be a function on the group.
struct AngularTerm {
  int m = 0;
  int n = 0;
  Complex coef{1.0, 0.0};
};

/// Bump profile on the chamber radius times a trigonometric polynomial in
/// the two Cartan angles: a closed-form compactly supported function on
/// SL(2,R), evaluatable exactly at arbitrary points (no sampled grids).
class TestFunction {
 public:
  TestFunction(BumpProfile profile, std::vector<AngularTerm> terms)
      : profile_(profile), terms_(std::move(terms)) {
    ZONAL_REQUIRE(profile_.support_radius > 0.0 && profile_.center >= 0.0 &&
                      profile_.center < profile_.support_radius,
                  "bump profile requires 0 <= center < support_radius");
    ZONAL_REQUIRE(profile_.smoothness >= 1, "bump smoothness must be >= 1");
    ZONAL_REQUIRE(!terms_.empty(), "angular factor needs at least one term");
    bool diagonal = true;
    for (const AngularTerm& t : terms_) {
      ZONAL_REQUIRE((t.m + t.n) % 2 == 0, "angular modes must have even m + n");
      ZONAL_REQUIRE(std::abs(t.m) <= 8 && std::abs(t.n) <= 8, "angular degree is capped at 8");
      if (t.m != t.n) diagonal = false;
    }
    // Non-diagonal angles are discontinuous on the K-slice, so the profile
    // must vanish there.
    ZONAL_REQUIRE(diagonal || profile_.lower_edge() > 1e-9,
                  "angular factor with m != n needs a profile supported away from radius 0");
  }

  static TestFunction k_bi_invariant_bump(double support_radius, double center = 0.0,
                                          int smoothness = 3, double amplitude = 1.0) {
    return TestFunction(BumpProfile{support_radius, center, smoothness, amplitude},
                        {AngularTerm{0, 0, Complex(1.0, 0.0)}});
  }

  const BumpProfile& profile() const { return profile_; }
  const std::vector<AngularTerm>& angular() const { return terms_; }
  double support_radius() const { return profile_.support_radius; }

  bool k_bi_invariant() const {
    for (const AngularTerm& t : terms_)
      if (t.m != 0 || t.n != 0) return false;
    return true;
  }

  bool nonnegative() const {
    if (!k_bi_invariant()) return false;
    Complex c{0.0, 0.0};
    for (const AngularTerm& t : terms_) c += t.coef;
    return std::abs(c.imag()) == 0.0 && c.real() >= 0.0 && profile_.amplitude >= 0.0;
  }

  /// Root-mean-square of the angular factor over K x K; together with the
  /// profile this is the exact K-average: (A f)(x) = |profile(u)| * angular_l2.
  double angular_l2() const {
    double s = 0.0;
    for (const AngularTerm& t : terms_) s += std::norm(t.coef);
    return std::sqrt(s);
  }

  Complex eval_cartan(double t, double theta1, double theta2) const {
    const double p = profile_(M_SQRT2 * t);
    if (p == 0.0) return {0.0, 0.0};
    Complex acc{0.0, 0.0};
    for (const AngularTerm& term : terms_)
      acc += term.coef * std::exp(Complex(0.0, term.m * theta1 + term.n * theta2));
    return p * acc;
  }

  Complex operator()(const GroupElement& x) const {
    ZONAL_REQUIRE(x.n() == 2, "test functions are realized on SL(2,R)");
    const Kak2 kk = kak2(x.m);
    return eval_cartan(kk.t, kk.theta1, kk.theta2);
  }

  /// f*(x) = conj f(x^{-1}). In Cartan coordinates the inverse swaps and
  /// inverts the rotations around the same chamber radius, which maps the
  /// family to itself: coefficients c*_{mn} = (-1)^{(m-n)/2} conj(c_{nm}).
  TestFunction star() const {
    std::vector<AngularTerm> starred;
    starred.reserve(terms_.size());
    for (const AngularTerm& t : terms_) {
      const int m = t.n, n = t.m;
      const double sign = ((m - n) / 2) % 2 == 0 ? 1.0 : -1.0;
      starred.push_back(AngularTerm{m, n, sign * std::conj(t.coef)});
    }
    return TestFunction(profile_, std::move(starred));
  }

 private:
  BumpProfile profile_;
  std::vector<AngularTerm> terms_;
};

inline TestFunction star_involution(const TestFunction& f) { return f.star(); }

}  // namespace zonal

#endif
