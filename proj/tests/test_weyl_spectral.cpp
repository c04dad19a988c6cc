#include <catch2/catch_amalgamated.hpp>

#include "zonal/random.hpp"
#include "zonal/spectral.hpp"
#include "zonal/weyl.hpp"

using namespace zonal;

namespace {

Vec random_param(const RootSystem& rs, RandomStream& s, double lo = -2.0, double hi = 2.0) {
  Vec v(rs.rank);
  for (int j = 0; j < rs.rank; ++j) v[j] = s.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("Weyl groups have the classical orders") {
  CHECK(generate_weyl(build_root_system("A1")).order() == 2);
  CHECK(generate_weyl(build_root_system("A2")).order() == 6);
  CHECK(generate_weyl(build_root_system("B2")).order() == 8);
  CHECK(generate_weyl(build_root_system("sl(4,R)")).order() == 24);
}

TEST_CASE("Weyl groups are closed, contain the identity, and preserve the root set") {
  for (const char* id : {"A1", "A2", "B2"}) {
    RootSystem rs = build_root_system(id);
    WeylGroup w = generate_weyl(rs);
    REQUIRE(approx(w.elements[0], Mat::Identity(rs.rank, rs.rank), 0.0));

    std::vector<Vec> all_roots = rs.positive_roots;
    for (const Vec& a : rs.positive_roots) all_roots.push_back(-a);
    for (const Mat& m : w.elements) {
      // gram orthogonality
      CHECK((m.transpose() * rs.gram * m - rs.gram).cwiseAbs().maxCoeff() < 1e-10);
      // image of every root is again a root
      for (const Vec& a : all_roots) {
        Vec img = m * a;
        bool matched = false;
        for (const Vec& b : all_roots)
          if ((img - b).cwiseAbs().maxCoeff() < 1e-10) matched = true;
        CHECK(matched);
      }
      // closure under composition and inverse
      for (const Mat& g : w.elements) {
        CHECK(detail::find_element(w.elements, m * g, 1e-8) >= 0);
      }
      CHECK(detail::find_element(w.elements, m.transpose(), 1e-8) >= 0);
    }
  }
}

TEST_CASE("minus identity sits in W exactly for A1 and B2") {
  CHECK(contains_minus_identity(generate_weyl(build_root_system("A1"))));
  CHECK_FALSE(contains_minus_identity(generate_weyl(build_root_system("A2"))));
  CHECK(contains_minus_identity(generate_weyl(build_root_system("B2"))));
}

TEST_CASE("orbit sizes divide the group order") {
  RandomStream s(101);
  for (const char* id : {"A1", "A2", "B2"}) {
    RootSystem rs = build_root_system(id);
    WeylGroup w = generate_weyl(rs);
    for (int i = 0; i < 100; ++i) {
      const std::size_t orbit = weyl_orbit(w, random_param(rs, s)).size();
      CHECK(w.order() % static_cast<int>(orbit) == 0);
    }
  }
}

TEST_CASE("dominant representative lands in the closed chamber and on the orbit") {
  RootSystem rs = build_root_system("A2");
  WeylGroup w = generate_weyl(rs);
  RandomStream s(7);

  SECTION("already dominant parameters are fixed") {
    SpectralParam lam = SpectralParam::real(rs.rho);
    CHECK((dominant_representative(rs, w, lam).re - rs.rho).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("rank 1 sign flip") {
    RootSystem r1 = build_root_system("A1");
    WeylGroup w1 = generate_weyl(r1);
    SpectralParam lam = SpectralParam::real(-3.0 * r1.rho);
    CHECK((dominant_representative(r1, w1, lam).re - 3.0 * r1.rho).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("random parameters: output dominant and in the enumerated orbit") {
    for (int i = 0; i < 50; ++i) {
      Vec v = random_param(rs, s);
      Vec rep = dominant_representative(rs, w, SpectralParam::real(v)).re;
      CHECK(is_dominant(rs, rep, 1e-9));
      bool in_orbit = false;
      for (const Vec& o : weyl_orbit(w, v))
        if ((o - rep).cwiseAbs().maxCoeff() < 1e-9) in_orbit = true;
      CHECK(in_orbit);
    }
  }
}

TEST_CASE("hull membership: trivial and rank-1 interval cases") {
  RootSystem rs = build_root_system("A1");
  WeylGroup w = generate_weyl(rs);
  auto sp = [&](double t) { return SpectralParam::real(t * rs.rho); };
  CHECK(in_convex_weyl_hull(rs, w, sp(1.0), sp(1.0)));
  CHECK(in_convex_weyl_hull(rs, w, sp(0.0), sp(1.0)));
  CHECK(in_convex_weyl_hull(rs, w, sp(0.5), sp(1.0)));
  CHECK(in_convex_weyl_hull(rs, w, sp(-1.0), sp(1.0)));  // boundary, inclusive
  CHECK_FALSE(in_convex_weyl_hull(rs, w, sp(1.5), sp(1.0)));
  CHECK_FALSE(in_convex_weyl_hull(rs, w, sp(-1.0 - 1e-6), sp(1.0)));
}

TEST_CASE("hull membership: zero is always inside, boundary is inclusive") {
  RootSystem rs = build_root_system("A2");
  WeylGroup w = generate_weyl(rs);
  RandomStream s(13);
  for (int i = 0; i < 20; ++i) {
    Vec mu = random_param(rs, s);
    CHECK(in_convex_weyl_hull(rs, w, SpectralParam::real(Vec::Zero(2)), SpectralParam::real(mu)));
    // a vertex and an edge midpoint of the orbit polytope are members
    std::vector<Vec> orbit = weyl_orbit(w, mu);
    CHECK(in_convex_weyl_hull(rs, w, SpectralParam::real(orbit[0]), SpectralParam::real(mu)));
    if (orbit.size() >= 2) {
      Vec mid = 0.5 * (orbit[0] + orbit[1]);
      CHECK(in_convex_weyl_hull(rs, w, SpectralParam::real(mid), SpectralParam::real(mu)));
    }
  }
}

TEST_CASE("hull fast path agrees with brute force on 1000 random pairs") {
  RandomStream s(23);
  for (const char* id : {"A2", "B2"}) {
    RootSystem rs = build_root_system(id);
    WeylGroup w = generate_weyl(rs);
    for (int i = 0; i < 500; ++i) {
      Vec l = random_param(rs, s), m = random_param(rs, s);
      CHECK(hull_contains_bruteforce(rs, w, l, m) == hull_contains_fastpath(rs, w, l, m));
    }
  }
}

TEST_CASE("hermitean criterion") {
  SECTION("rank 1: every real parameter is hermitean") {
    RootSystem rs = build_root_system("A1");
    WeylGroup w = generate_weyl(rs);
    RandomStream s(3);
    for (int i = 0; i < 20; ++i)
      CHECK(is_hermitean_param(rs, w, SpectralParam::real(random_param(rs, s))));
  }
  SECTION("A2: multiples of rho are hermitean, generic combinations are not") {
    RootSystem rs = build_root_system("A2");
    WeylGroup w = generate_weyl(rs);
    for (double t : {-1.5, -0.3, 0.0, 0.7, 2.0})
      CHECK(is_hermitean_param(rs, w, SpectralParam::real(t * rs.rho)));
    CHECK_FALSE(is_hermitean_param(
        rs, w, SpectralParam::real(rs.simple(0) + 0.5 * rs.simple(1))));
  }
  SECTION("A2: the real hermitean set is the union of the root lines") {
    RootSystem rs = build_root_system("A2");
    WeylGroup w = generate_weyl(rs);
    RandomStream s(17);
    for (int i = 0; i < 100; ++i) {
      Vec l(2);
      if (i % 2 == 0) {
        l = random_param(rs, s);
      } else {
        l = s.uniform(-2.0, 2.0) * rs.positive_roots[static_cast<std::size_t>(i / 2 % 3)];
      }
      bool on_line = false;
      for (const Vec& beta : rs.positive_roots) {
        const Vec proj = rs.inner(l, beta) / rs.inner(beta, beta) * beta;
        if ((l - proj).norm() < 1e-8) on_line = true;
      }
      CHECK(is_hermitean_param(rs, w, SpectralParam::real(l)) == on_line);
    }
  }
  SECTION("complex parameters need w Re = -Re and w Im = Im simultaneously") {
    RootSystem rs = build_root_system("A2");
    WeylGroup w = generate_weyl(rs);
    // Re on the alpha1 line; the reflection fixing that criterion flips
    // alpha1, so Im must be orthogonal to alpha1 to be fixed.
    Vec re = rs.simple(0);
    Vec im_good = rs.rho - rs.simple(0) * (rs.inner(rs.rho, rs.simple(0)) /
                                           rs.inner(rs.simple(0), rs.simple(0)));
    CHECK(is_hermitean_param(rs, w, SpectralParam::complex(re, im_good)));
    CHECK_FALSE(is_hermitean_param(rs, w, SpectralParam::complex(re, re)));
  }
}

TEST_CASE("minimal dominating parameter") {
  RandomStream s(29);
  for (const char* id : {"A1", "A2", "B2"}) {
    RootSystem rs = build_root_system(id);
    WeylGroup w = generate_weyl(rs);
    std::vector<Vec> hs = dual_basis(rs);

    SECTION(std::string("singleton is fixed: ") + id) {
      Vec v = Vec::Zero(rs.rank);
      for (int j = 0; j < rs.rank; ++j) v += s.uniform(0.2, 2.0) * hs[static_cast<std::size_t>(j)];
      SpectralParam star = minimal_dominating_param(rs, {SpectralParam::real(v)});
      CHECK((star.re - v).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION(std::string("comparable pair returns the larger: ") + id) {
      Vec v = Vec::Zero(rs.rank);
      for (int j = 0; j < rs.rank; ++j) v += s.uniform(0.3, 1.0) * hs[static_cast<std::size_t>(j)];
      Vec bigger = v + 0.4 * rs.simple(0);
      if (!is_dominant(rs, bigger, 1e-12)) bigger = v + 0.4 * rs.rho;
      SpectralParam star =
          minimal_dominating_param(rs, {SpectralParam::real(v), SpectralParam::real(bigger)});
      CHECK((star.re - bigger).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION(std::string("incomparable sets: dominating and coordinate-minimal: ") + id) {
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<SpectralParam> lams;
        const int size = 2 + rep % 3;
        for (int k = 0; k < size; ++k) {
          Vec v = Vec::Zero(rs.rank);
          for (int j = 0; j < rs.rank; ++j)
            v += s.uniform(0.2, 2.0) * hs[static_cast<std::size_t>(j)];
          lams.push_back(SpectralParam::real(v));
        }
        SpectralParam star = minimal_dominating_param(rs, lams);
        for (const SpectralParam& lam : lams) CHECK(in_convex_weyl_hull(rs, w, lam, star));
        for (int j = 0; j < rs.rank; ++j) {
          const SpectralParam* witness = &lams[0];
          for (const SpectralParam& lam : lams)
            if (rs.inner(lam.re, hs[static_cast<std::size_t>(j)]) >
                rs.inner(witness->re, hs[static_cast<std::size_t>(j)]))
              witness = &lam;
          Vec lowered = star.re - 1e-3 * rs.simple(j);
          CHECK_FALSE(hull_contains_bruteforce(rs, w, witness->re, lowered));
        }
      }
    }
  }
  SECTION("empty input rejected") {
    RootSystem rs = build_root_system("A1");
    CHECK_THROWS_AS(minimal_dominating_param(rs, {}), invalid_input);
  }
}

TEST_CASE("critical integrability exponent") {
  for (const char* id : {"A1", "A2", "B2"}) {
    RootSystem rs = build_root_system(id);
    SECTION(std::string("q = 2/(1-t) on the rho ray: ") + id) {
      for (double t : {0.0, 0.25, 0.5, 2.0 / 3.0}) {
        CriticalExponent ce = critical_integrability_exponent(rs, SpectralParam::real(t * rs.rho));
        REQUIRE(ce.finite);
        CHECK(std::abs(ce.q - 2.0 / (1.0 - t)) <= 1e-12 * ce.q);
      }
    }
    SECTION(std::string("lambda = rho has no finite decay: ") + id) {
      CHECK_FALSE(critical_integrability_exponent(rs, SpectralParam::real(rs.rho)).finite);
    }
  }
  SECTION("the computed threshold separates convergent from divergent chamber integrals") {
    // envelope^q against e^{2 rho(H)} along the chamber, growing truncation:
    // for q above the critical exponent the tail contributions die off, below
    // they blow up (A1: closed-form 1D integrand).
    RootSystem rs = build_root_system("A1");
    SpectralParam lam = SpectralParam::real(0.5 * rs.rho);
    CriticalExponent ce = critical_integrability_exponent(rs, lam);
    REQUIRE(ce.finite);
    auto tail = [&](double q, double lo, double hi) {
      double acc = 0.0;
      const int n = 400;
      for (int i = 0; i < n; ++i) {
        const double h = lo + (hi - lo) * (i + 0.5) / n;  // frame coordinate
        Vec hv(1);
        hv << h;
        const double envelope = std::exp((lam.re - rs.rho).dot(hv));
        acc += std::pow(envelope, q) * std::exp(2.0 * rs.rho.dot(hv)) * (hi - lo) / n;
      }
      return acc;
    };
    const double above = ce.q * 1.10, below = ce.q * 0.90;
    CHECK(tail(above, 40.0, 60.0) < tail(above, 20.0, 40.0));  // decaying tail
    CHECK(tail(below, 40.0, 60.0) > tail(below, 20.0, 40.0));  // growing tail
  }
}
