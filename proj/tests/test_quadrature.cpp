#include <catch2/catch_amalgamated.hpp>

#include "zonal/linalg.hpp"
#include "zonal/quadrature.hpp"
#include "zonal/random.hpp"

using namespace zonal;

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
  std::vector<double> xs, ws;
  quad::gauss_legendre(12, xs, ws);
  for (int k = 0; k <= 23; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * std::pow(xs[i], k);
    const double expect = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(std::abs(acc - expect) < 1e-13);
  }
}

TEST_CASE("adaptive interval rule: smooth and spiked integrands") {
  SECTION("exp on [0,1]") {
    QuadResult r = quad::integrate_interval([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12, 4);
    CHECK(r.converged);
    CHECK(std::abs(r.value.real() - (std::exp(1.0) - 1.0)) < 1e-12);
  }
  SECTION("narrow Lorentzian spike") {
    const double eps = 1e-6;
    auto f = [eps](double x) { return eps / (x * x + eps * eps); };
    QuadResult r = quad::integrate_interval(f, -1.0, 1.0, 1e-10, 8);
    CHECK(r.converged);
    CHECK(std::abs(r.value.real() - 2.0 * std::atan(1.0 / eps)) < 1e-8);
  }
  SECTION("error estimate is honest when the budget is too small") {
    const double eps = 1e-9;
    auto f = [eps](double x) { return eps / (x * x + eps * eps); };
    QuadResult r = quad::integrate_interval(f, -1.0, 1.0, 1e-12, 4, 16);
    CHECK_FALSE(r.converged);
  }
}

TEST_CASE("circle rule matches a Bessel moment and is deterministic") {
  QuadratureSpec spec = QuadratureSpec::circle(256, 1e-12);
  auto f = [](double th) { return std::exp(std::cos(th)); };
  QuadResult a = quad::integrate_circle(f, spec);
  QuadResult b = quad::integrate_circle(f, spec);
  CHECK(a.converged);
  CHECK(std::abs(a.value.real() - 1.2660658777520084) < 1e-12);  // I_0(1)
  CHECK(a.value.real() == b.value.real());
  CHECK(a.error == b.error);
}

TEST_CASE("trapezoid circle rule is exact on band-limited integrands") {
  auto f = [](double th) { return Complex(std::cos(3 * th) * std::cos(3 * th), std::sin(2 * th)); };
  Complex v = quad::circle_trapezoid(f, 16);
  CHECK(std::abs(v.real() - 0.5) < 1e-14);
  CHECK(std::abs(v.imag()) < 1e-14);
}

TEST_CASE("quadrature fingerprints separate distinct specs") {
  QuadratureSpec a = QuadratureSpec::circle(256);
  QuadratureSpec b = QuadratureSpec::circle(512);
  QuadratureSpec c = QuadratureSpec::monte_carlo(100000, 1);
  QuadratureSpec d = QuadratureSpec::monte_carlo(100000, 2);
  CHECK(a.fingerprint() != b.fingerprint());
  CHECK(c.fingerprint() != d.fingerprint());
  CHECK(a.fingerprint() == QuadratureSpec::circle(256).fingerprint());
}

TEST_CASE("random streams") {
  SECTION("substreams are reproducible and independent of draw order") {
    RandomStream base(123);
    RandomStream a1 = base.substream(4);
    base.uniform();  // consuming the parent does not shift substreams
    RandomStream a2 = RandomStream(123).substream(4);
    for (int i = 0; i < 16; ++i) CHECK(a1.uniform() == a2.uniform());
  }
  SECTION("chunked accumulation equals pointwise accumulation") {
    // per-point substreams: a sum over points is invariant under chunking
    auto value_of_point = [](int i) {
      RandomStream s = RandomStream(9).substream(static_cast<std::uint64_t>(i));
      return s.normal();
    };
    double direct = 0.0;
    for (int i = 0; i < 64; ++i) direct += value_of_point(i);
    double chunked = 0.0;
    for (int chunk = 0; chunk < 4; ++chunk)
      for (int i = 16 * chunk; i < 16 * (chunk + 1); ++i) chunked += value_of_point(i);
    CHECK(direct == chunked);
  }
  SECTION("normal moments are sane") {
    RandomStream s(77);
    double m1 = 0.0, m2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = s.normal();
      m1 += x;
      m2 += x * x;
    }
    CHECK(std::abs(m1 / n) < 0.01);
    CHECK(std::abs(m2 / n - 1.0) < 0.02);
  }
}
