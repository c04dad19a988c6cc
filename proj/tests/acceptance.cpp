// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerance and its runtime budget in code.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zonal/run.hpp"

using namespace zonal;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds, double budget_seconds) {
  const bool in_budget = seconds < budget_seconds;
  if (!pass || !in_budget) ++failures;
  std::printf("criterion %2d %-4s %s: %s [%.1fs / budget %.0fs]\n", id,
              pass && in_budget ? "PASS" : "FAIL", name.c_str(), detail.c_str(), seconds,
              budget_seconds);
  std::fflush(stdout);
}

template <class F>
void run_criterion(int id, const std::string& name, double budget_seconds, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, pass, detail, dt, budget_seconds);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  // 1. phi_rho == 1 on SL(2,R): 51 points on [0,5], order-256 circle rule, < 1e-6.
  run_criterion(1, "phi-rho-constant", 5.0, [](std::string& detail) {
    SLGroup g(2);
    QuadratureSpec q = QuadratureSpec::circle(256, 1e-9);
    double worst = 0.0;
    for (int i = 0; i < 51; ++i) {
      const double t = 5.0 * i / 50.0;
      SphericalValue v = phi(g, SpectralParam::real(g.root_system().rho), g.a(t), q);
      worst = std::max(worst, std::abs(v.value - Complex(1.0, 0.0)));
    }
    detail = "max |phi_rho - 1| = " + format_double(worst);
    return worst < 1e-6;
  });

  // 2. Functional equation: residual < 1e-5 on 100 random pairs of radius <= 3,
  //    for lambda in {0, 0.4 rho, i rho}.
  run_criterion(2, "functional-equation", 120.0, [](std::string& detail) {
    SLGroup g(2);
    const RootSystem& rs = g.root_system();
    QuadratureSpec q = QuadratureSpec::circle(256, 1e-8);
    std::vector<SpectralParam> lambdas = {SpectralParam::real(Vec::Zero(1)),
                                          SpectralParam::real(0.4 * rs.rho),
                                          SpectralParam::complex(Vec::Zero(1), rs.rho)};
    double worst = 0.0;
    int checked = 0;
    const int pairs = 100;
    std::vector<double> res(static_cast<std::size_t>(pairs));
    for (const SpectralParam& lam : lambdas) {
      parallel_for(pairs, default_thread_count(), [&](int i) {
        RandomStream s = RandomStream(0x5EED).substream(static_cast<std::uint64_t>(i));
        GroupElement x = g.random_element(3.0 * s.uniform(), s);
        GroupElement y = g.random_element(3.0 * s.uniform(), s);
        res[static_cast<std::size_t>(i)] =
            functional_equation_residual(g, lam, x, y, q).residual;
      });
      for (double r : res) {
        worst = std::max(worst, r);
        ++checked;
      }
    }
    detail = "worst residual over " + std::to_string(checked) + " = " + format_double(worst);
    return worst < 1e-5;
  });

  // 3. Two-sided envelope: SL(2,R) bands finite/positive with ratio -> 1 at 0+,
  //    bands matching the frozen regression window; SL(3,R) Monte Carlo
  //    positivity within 3 sigma at 1e5 samples.
  run_criterion(3, "npp-envelope", 300.0, [](std::string& detail) {
    SLGroup g2(2);
    const RootSystem& r2 = g2.root_system();
    QuadratureSpec q = QuadratureSpec::circle(256, 1e-10);
    q.truncation_radius = 10.0;
    bool ok = true;
    std::vector<Vec> grid;
    {
      Vec h(1);
      h << M_SQRT2 * 1e-4;
      grid.push_back(h);
      for (int i = 0; i < 40; ++i) {
        Vec hh(1);
        hh << M_SQRT2 * 0.1 * std::pow(60.0, i / 39.0);
        grid.push_back(hh);
      }
    }
    struct Window {
      double scale, lo, hi;
    };
    for (Window wdw : {Window{0.0, 0.655536897623, 0.918678588284},
                       Window{0.5, 1.04930416129, 1.66736299093}}) {
      RatioScan scan = npp_ratio_scan(g2, SpectralParam::real(wdw.scale * r2.rho), grid, q);
      ok = ok && scan.converged && std::abs(scan.rows[0].ratio - 1.0) < 1e-3;
      double lo = 1e300, hi = 0.0;
      for (std::size_t i = 1; i < scan.rows.size(); ++i) {
        lo = std::min(lo, scan.rows[i].ratio);
        hi = std::max(hi, scan.rows[i].ratio);
      }
      ok = ok && lo > 0.0 && std::isfinite(hi);
      ok = ok && std::abs(lo - wdw.lo) < 2e-4 && std::abs(hi - wdw.hi) < 2e-4;
      detail += "band(" + format_double(wdw.scale) + ")=[" + format_double(lo) + "," +
                format_double(hi) + "] ";
    }
    SLGroup g3(3);
    QuadratureSpec mc = QuadratureSpec::monte_carlo(100000, 0x5EED, 6.0);
    RatioScan scan3 =
        npp_ratio_scan(g3, SpectralParam::real(Vec::Zero(2)), chamber_grid(g3.root_system(), 6.0, 6), mc);
    int positive = 0, total = 0;
    for (const RatioRow& row : scan3.rows)
      if (!row.skipped) {
        ++total;
        if (row.phi - 3.0 * row.phi_error > 0.0) ++positive;
      }
    detail += "sl3 positive " + std::to_string(positive) + "/" + std::to_string(total);
    return ok && positive == total;
  });

  // 4. Comparison theorem: 200 random pairs in A1 and A2 with grid verdicts
  //    consistent with hull membership wherever decisive; the two hull routes
  //    agree exactly on 1000 pairs.
  run_criterion(4, "comparison-theorem", 300.0, [](std::string& detail) {
    int inconsistent = 0, indecisive = 0;
    struct SystemCase {
      int n;
      double radius;
      QuadratureSpec quad;
      int grid_points;
    };
    for (const SystemCase& sc :
         {SystemCase{2, 6.0, QuadratureSpec::circle(256, 1e-10), 12},
          SystemCase{3, 3.0, QuadratureSpec::monte_carlo(20000, 0x5EED), 4}}) {
      SLGroup g(sc.n);
      const RootSystem& rs = g.root_system();
      std::vector<Vec> grid = chamber_grid(rs, sc.radius, sc.grid_points);
      const int pairs = 100;
      std::vector<CompareReport> reports(static_cast<std::size_t>(pairs));
      parallel_for(pairs, default_thread_count(), [&](int i) {
        RandomStream s =
            RandomStream(0x5EED ^ (0x100u * sc.n)).substream(static_cast<std::uint64_t>(i));
        Vec l(rs.rank), m(rs.rank);
        for (int j = 0; j < rs.rank; ++j) {
          l[j] = s.uniform(-1.2, 1.2);
          m[j] = s.uniform(-1.2, 1.2);
        }
        QuadratureSpec q = sc.quad;
        q.seed = 0x5EED + static_cast<std::uint64_t>(1000 * i);
        q.truncation_radius = sc.radius + 1.0;
        reports[static_cast<std::size_t>(i)] =
            compare_on_grid(g, SpectralParam::real(l), SpectralParam::real(m), grid, q);
      });
      for (const CompareReport& r : reports) {
        if (!r.consistent) ++inconsistent;
        if (!r.decisive) ++indecisive;
      }
    }
    int disagreements = 0;
    RandomStream s(0xABCD);
    for (const char* id : {"A1", "A2", "B2"}) {
      RootSystem rs = build_root_system(id);
      WeylGroup w = generate_weyl(rs);
      for (int i = 0; i < 334; ++i) {
        Vec l(rs.rank), m(rs.rank);
        for (int j = 0; j < rs.rank; ++j) {
          l[j] = s.uniform(-2.0, 2.0);
          m[j] = s.uniform(-2.0, 2.0);
        }
        if (hull_contains_bruteforce(rs, w, l, m) != hull_contains_fastpath(rs, w, l, m))
          ++disagreements;
      }
    }
    detail = "0 inconsistent expected: got " + std::to_string(inconsistent) + ", " +
             std::to_string(indecisive) + " indecisive, " + std::to_string(disagreements) +
             " route disagreements over 1002 pairs";
    return inconsistent == 0 && disagreements == 0;
  });

  // 5. Weyl/Kostant combinatorics: group orders, -I membership, A2 hermitean
  //    classification against the root-line oracle on 100 parameters.
  run_criterion(5, "weyl-kostant", 10.0, [](std::string& detail) {
    bool ok = true;
    ok = ok && generate_weyl(build_root_system("A1")).order() == 2;
    ok = ok && generate_weyl(build_root_system("A2")).order() == 6;
    ok = ok && generate_weyl(build_root_system("B2")).order() == 8;
    ok = ok && contains_minus_identity(generate_weyl(build_root_system("A1")));
    ok = ok && !contains_minus_identity(generate_weyl(build_root_system("A2")));
    ok = ok && contains_minus_identity(generate_weyl(build_root_system("B2")));
    RootSystem rs = build_root_system("A2");
    WeylGroup w = generate_weyl(rs);
    RandomStream s(0x5EED);
    int correct = 0;
    for (int i = 0; i < 100; ++i) {
      Vec l(2);
      if (i % 2 == 0) {
        for (int j = 0; j < 2; ++j) l[j] = s.uniform(-2.0, 2.0);
      } else {
        l = s.uniform(-2.0, 2.0) * rs.positive_roots[static_cast<std::size_t>((i / 2) % 3)];
      }
      bool on_line = false;
      for (const Vec& beta : rs.positive_roots) {
        const Vec proj = rs.inner(l, beta) / rs.inner(beta, beta) * beta;
        if ((l - proj).norm() < 1e-8) on_line = true;
      }
      if (is_hermitean_param(rs, w, SpectralParam::real(l)) == on_line) ++correct;
    }
    detail = "orders/minus-identity checked, hermitean " + std::to_string(correct) + "/100";
    return ok && correct == 100;
  });

  // 6. Critical exponent: q = 2/(1-t) at machine precision on the rho ray.
  run_criterion(6, "critical-exponent", 1.0, [](std::string& detail) {
    RootSystem rs = build_root_system("A1");
    bool ok = true;
    for (double t : {0.0, 0.25, 0.5, 2.0 / 3.0}) {
      CriticalExponent ce = critical_integrability_exponent(rs, SpectralParam::real(t * rs.rho));
      ok = ok && ce.finite && std::abs(ce.q - 2.0 / (1.0 - t)) <= 1e-12 * (2.0 / (1.0 - t));
    }
    CriticalExponent zero = critical_integrability_exponent(rs, SpectralParam::real(Vec::Zero(1)));
    ok = ok && zero.finite && std::abs(zero.q - 2.0) <= 1e-12;
    ok = ok && !critical_integrability_exponent(rs, SpectralParam::real(rs.rho)).finite;
    detail = "q(0) = " + format_double(zero.q) + ", rho marked infinite";
    return ok;
  });

  // 7. Submultiplicativity: 5 bump pairs, pointwise at 50 points and in norm,
  //    each within the 3-sigma Monte Carlo allowance at 1e5 samples.
  run_criterion(7, "submultiplicativity", 600.0, [](std::string& detail) {
    RunConfig cfg;
    fs::path dir = fs::temp_directory_path() / "zonal-acceptance-submult";
    fs::remove_all(dir);
    CommandOutcome out = execute_command("conv-submult", cfg, dir.string(), 1);
    fs::remove_all(dir);
    detail = out.summary;
    return out.exit_code == 0;
  });

  // 8. Norm axioms: triangle, homogeneity, star isometry, positivity within
  //    the stated allowances.
  run_criterion(8, "norm-axioms", 180.0, [](std::string& detail) {
    fs::path dir = fs::temp_directory_path() / "zonal-acceptance-norm";
    fs::remove_all(dir);
    RunConfig c1;
    CommandOutcome a = execute_command("norm-lambda", c1, dir.string(), 1);
    RunConfig c2;
    CommandOutcome b = execute_command("star-norm", c2, dir.string(), 1);
    fs::remove_all(dir);
    detail = a.summary + "; " + b.summary;
    return a.exit_code == 0 && b.exit_code == 0;
  });

  // 9. Eigenfunction identity: residual < 1e-4 for bi-invariant bumps at
  //    lambda in {0, 0.5 rho, rho}, points of radius <= 2.
  run_criterion(9, "eigenfunction", 120.0, [](std::string& detail) {
    SLGroup g(2);
    const RootSystem& rs = g.root_system();
    QuadratureSpec q = QuadratureSpec::circle(128, 1e-7);
    TestFunction f = TestFunction::k_bi_invariant_bump(1.8, 0.0, 3, 1.0);
    double worst = 0.0;
    for (double scale : {0.0, 0.5, 1.0}) {
      const int points = 5;
      std::vector<double> res(points);
      parallel_for(points, default_thread_count(), [&](int i) {
        RandomStream s = RandomStream(0x5EED + static_cast<std::uint64_t>(scale * 64))
                             .substream(static_cast<std::uint64_t>(i));
        GroupElement x = g.random_element(2.0 * s.uniform(), s);
        res[static_cast<std::size_t>(i)] =
            eigenfunction_residual(g, f, SpectralParam::real(scale * rs.rho), x, q).residual;
      });
      for (double r : res) worst = std::max(worst, r);
    }
    detail = "worst residual = " + format_double(worst);
    return worst < 1e-4;
  });

  // 10. Principal series: unitarity at 1e-6 over 100 random pairs at n_max 64;
  //     the coefficient/spherical lock at 1e-6; the unit-constant K-finite
  //     bound on the full grid; the rms bound for 10 random mode pairs.
  run_criterion(10, "principal-series", 300.0, [](std::string& detail) {
    SLGroup g(2);
    const RootSystem& rs = g.root_system();
    QuadratureSpec q = QuadratureSpec::circle(256, 1e-6);
    bool ok = true;

    double worst_deficit = 0.0;
    const int cases = 100;
    std::vector<double> deficits(cases);
    parallel_for(cases, default_thread_count(), [&](int i) {
      RandomStream s = RandomStream(0x5EED + 9).substream(static_cast<std::uint64_t>(i));
      const double nu = s.uniform(0.2, 2.5);
      GroupElement x = g.random_element(1.2 * s.uniform(), s);
      FourierVector xi = FourierVector::zero(64);
      for (int m = -8; m <= 8; m += 2) xi.at_mode(m) = Complex(s.uniform(-1, 1), s.uniform(-1, 1));
      RepApplied out = rep_apply(RepParam{nu}, x, xi, q);
      deficits[static_cast<std::size_t>(i)] = std::abs(out.vec.norm() - xi.norm()) / xi.norm();
    });
    for (double d : deficits) worst_deficit = std::max(worst_deficit, d);
    ok = ok && worst_deficit < 1e-6;

    double worst_lock = 0.0;
    FourierVector e0 = FourierVector::basis(0, 0);
    for (double nu : {0.5, 1.0, 2.0}) {
      for (double t : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        CoefValue cv = matrix_coefficient(RepParam{nu}, g.a(t), e0, e0, q);
        SphericalValue ph = phi(g, SpectralParam::complex(Vec::Zero(1), nu * rs.rho), g.a(t),
                                QuadratureSpec::circle(256, 1e-11));
        worst_lock = std::max(worst_lock, std::abs(cv.value - ph.value));
      }
    }
    ok = ok && worst_lock < 1e-6;

    std::vector<double> t_grid;
    for (int i = 0; i < 9; ++i) t_grid.push_back(4.0 * i / 8.0);
    ThmBReport tb = thmB_kfinite_bound_report(g, RepParam{1.0}, {{0, 0}, {0, 2}, {2, 2}, {0, 4}},
                                              t_grid, 8, 1e-6);
    ok = ok && tb.all_ok;

    bool rms_ok = true;
    RandomStream s(0x5EED + 21);
    for (int i = 0; i < 10; ++i) {
      FourierVector xi = FourierVector::zero(8), eta = FourierVector::zero(8);
      for (int m = -4; m <= 4; m += 2) {
        xi.at_mode(m) = Complex(s.uniform(-1, 1), s.uniform(-1, 1));
        eta.at_mode(m) = Complex(s.uniform(-1, 1), s.uniform(-1, 1));
      }
      RmsBoundReport rb = rms_coeff_bound_report(g, RepParam{s.uniform(0.3, 2.0)}, xi, eta,
                                                 {0.0, 0.5, 1.0, 1.7, 2.5, 3.2, 4.0},
                                                 QuadratureSpec::circle(48, 1e-9));
      rms_ok = rms_ok && rb.all_ok;
    }
    ok = ok && rms_ok;
    detail = "unitarity deficit " + format_double(worst_deficit) + ", lock " +
             format_double(worst_lock) + ", K-finite bound " + (tb.all_ok ? "holds" : "fails") +
             ", rms bound " + (rms_ok ? "holds" : "fails");
    return ok;
  });

  // 11. Full suite through the CLI: exit 0 and byte-identical reports across
  //     two runs with the same seed.
  run_criterion(11, "cli-full-suite", 1800.0, [](std::string& detail) {
    const std::string cli = ZONAL_CLI_PATH;
    fs::path base = fs::temp_directory_path() / "zonal-acceptance-cli";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string out1 = (base / "run1").string(), out2 = (base / "run2").string();
    const std::string cmd1 = cli + " all --seed 24285 --out " + out1 + " > " +
                             (base / "log1.txt").string() + " 2>&1";
    const std::string cmd2 = cli + " all --seed 24285 --out " + out2 + " > " +
                             (base / "log2.txt").string() + " 2>&1";
    const int rc1 = std::system(cmd1.c_str());
    const int rc2 = std::system(cmd2.c_str());
    if (rc1 != 0 || rc2 != 0) {
      detail = "CLI exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2) +
               " (log: " + (base / "log1.txt").string() + ")";
      return false;
    }
    // byte-compare every produced file
    std::map<std::string, std::string> first, second;
    for (const auto& f : fs::directory_iterator(out1))
      first[f.path().filename().string()] = slurp(f.path().string());
    for (const auto& f : fs::directory_iterator(out2))
      second[f.path().filename().string()] = slurp(f.path().string());
    if (first.size() != second.size() || first.empty()) {
      detail = "report sets differ in size";
      return false;
    }
    for (const auto& [name, text] : first) {
      auto it = second.find(name);
      if (it == second.end() || it->second != text) {
        detail = "report differs: " + name;
        return false;
      }
    }
    detail = std::to_string(first.size()) + " reports byte-identical, exit 0";
    fs::remove_all(base);
    return true;
  });

  if (failures == 0)
    std::printf("acceptance: ALL CRITERIA PASS\n");
  else
    std::printf("acceptance: %d FAILURES\n", failures);
  return failures == 0 ? 0 : 1;
}
