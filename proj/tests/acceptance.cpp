// Acceptance checks. One line per criterion:
//   [PASS] 3 jacobian degeneracy: ...
// `acceptance --criterion N` runs one criterion; without arguments all run.
// Exit status is 0 iff every selected criterion passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sphcone/admissibility.hpp"
#include "sphcone/cli.hpp"
#include "sphcone/eigencheck.hpp"
#include "sphcone/lemmas.hpp"
#include "sphcone/metric.hpp"
#include "sphcone/solver.hpp"

using namespace sphcone;

namespace {

// Tolerances, as fixed by the acceptance criteria.
constexpr double kFamilyResidualTol = 1e-12;
constexpr double kConeAngleTol = 1e-10;
constexpr double kRigidityRadius = 0.05;
constexpr int kRigiditySamples = 500;
constexpr double kMinConvergence = 0.95;
constexpr double kFamilyDistanceTol = 1e-6;
constexpr double kSigmaRatioTol = 1e-6;
constexpr double kDefectMargin = 1e-9;
constexpr double kIsoscelesTol = 1e-6;
constexpr double kClosedFormTol = 1e-9;
constexpr int kLemma3Pairs = 20;
constexpr double kLemma3Separation = 0.05;
constexpr int kCaseBNodes = 1000;
constexpr double kMpTol = 1e-12;
constexpr double kChiTol = 1e-10;
constexpr double kAreaTol = 1e-10;
constexpr double kEigenResidualTol = 1e-4;
constexpr double kOrderLo = 1.9;
constexpr double kOrderHi = 2.1;
constexpr double kSuiteSeconds = 60.0;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

// 9 x 9 x 9 grid of (alpha, beta, t).
template <typename F>
void for_grid(F&& f) {
  for (double a : linspace(0.3, kPi - 0.3, 9))
    for (double b : linspace(0.3, kPi - 0.3, 9))
      for (double t : linspace(0.2, kPi - 0.2, 9)) f(a, b, t);
}

Outcome family_realization() {
  double max_res = 0.0;
  double max_angle = 0.0;
  for_grid([&](double a, double b, double t) {
    const auto spec = ConeAngleSpec::make(a, b);
    const auto g = glued_football({spec, t});
    max_res = std::max(max_res, solver::residual(g, spec).norm());
    const auto c = cone_angles(g);
    max_angle = std::max({max_angle, std::abs(c.theta_A - a), std::abs(c.theta_B - b),
                          std::abs(c.theta_D - a - b), std::abs(c.theta_C - 4 * kPi)});
  });
  return {max_res < kFamilyResidualTol && max_angle < kConeAngleTol,
          "729 points, max residual " + fmt(max_res) + ", max angle error " + fmt(max_angle)};
}

Outcome rigidity() {
  const std::vector<std::array<double, 3>> cases{
      {kPi / 2, kPi / 2, kPi / 3}, {1.0, 2.0, 1.2}, {kPi / 2, kPi / 2, kPi / 2}, {1.0, 2.0, 2.0}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& c : cases) {
    solver::RigidityOptions o;
    o.radius = kRigidityRadius;
    o.samples = kRigiditySamples;
    o.dist_tol = kFamilyDistanceTol;
    o.workers = 4;
    const auto r = solver::rigidity_scan({ConeAngleSpec::make(c[0], c[1]), c[2]}, o);
    const bool pass = r.convergence_rate() >= kMinConvergence && r.max_family_distance < kFamilyDistanceTol;
    ok = ok && pass;
    d << "(" << fmt(c[0]) << "," << fmt(c[1]) << "," << fmt(c[2]) << "): " << r.converged << "/" << r.starts
      << " dist " << fmt(r.max_family_distance) << "; ";
  }
  return {ok, d.str()};
}

Outcome jacobian_degeneracy() {
  int max_rank = 0;
  double max_ratio = 0.0;
  for_grid([&](double a, double b, double t) {
    const auto spec = ConeAngleSpec::make(a, b);
    const auto rr = solver::numerical_rank(solver::jacobian(glued_football({spec, t}), spec), kSigmaRatioTol);
    max_rank = std::max(max_rank, rr.rank);
    max_ratio = std::max(max_ratio, rr.singular_values[3] / rr.singular_values[0]);
  });
  return {max_rank <= 3 && max_ratio < kSigmaRatioTol,
          "max rank " + std::to_string(max_rank) + ", max sigma4/sigma1 " + fmt(max_ratio)};
}

Outcome lemma2_signs() {
  using namespace lemmas;
  const std::vector<double> eps{0.01, 0.05, 0.1};
  int feasible = 0;
  int sign_ok = 0;
  int product_ok = 0;
  std::ostringstream d;
  auto add = [&](const DefectSweep& s, const std::string& tag) {
    feasible += s.feasible;
    sign_ok += s.sign_ok;
    product_ok += s.product_ok;
    d << tag << " defect in [" << fmt(s.min_defect) << ", " << fmt(s.max_defect) << "]; ";
  };
  for (double beta : {1.0, kPi / 2, 2.5}) {
    for (auto regime : {Regime::below, Regime::above}) {
      add(defect_sweep(beta, beta, eps, regime_ell_grid(regime, 100), regime, 4, kDefectMargin),
          "beta " + fmt(beta) + " " + to_string(regime));
    }
  }
  for (auto regime : {Regime::below, Regime::above}) {
    for (double e : eps) {
      const auto s = step1_asymmetric_exclusion(1.0, 2.0, e, regime_ell_grid(regime, 100), regime, 4);
      feasible += s.feasible;
      sign_ok += s.sign_ok;
      product_ok += s.product_ok;
    }
  }
  std::ostringstream head;
  head << feasible << " feasible nodes, expected sign on " << sign_ok << ", product sign on " << product_ok << "; ";
  return {feasible > 0 && sign_ok == feasible && product_ok == feasible, head.str() + d.str()};
}

Outcome lemma3() {
  using namespace lemmas;
  oracle::SplitMix rng{2024};
  int pairs = 0;
  int located = 0;
  int classified = 0;
  int reversed = 0;
  double worst_gap = 0.0;
  while (pairs < kLemma3Pairs) {
    double ell = rng.uniform(0.2, kPi - 0.2);
    double beta = rng.uniform(0.2, kPi - 0.2);
    if (std::cos(ell) < std::cos(beta)) std::swap(ell, beta);
    if (std::cos(ell) - std::cos(beta) <= kLemma3Separation) continue;
    ++pairs;
    const auto r = lemma3_sweep(ell, beta);
    worst_gap = std::max(worst_gap, r.max_isosceles_gap);
    located += !r.extrema.empty() && r.max_isosceles_gap < kIsoscelesTol;
    classified += r.kinds_ok;
    reversed += r.kinds_reversed;
  }
  const auto closed = lemma3_sweep(kPi / 3, kPi / 2);
  const double a0 = std::acos(1.0 / std::sqrt(3.0));
  double closed_err = 1.0;
  for (const auto& e : closed.extrema) closed_err = std::min(closed_err, std::abs(e.alpha_crit - a0));
  const auto flat = lemma3_sweep(kPi / 3, kPi / 3);
  const bool flat_ok = flat.degenerate && flat.kinds_ok;

  std::ostringstream d;
  d << "located " << located << "/" << pairs << " (max gap " << fmt(worst_gap) << "), classification rule "
    << classified << "/" << pairs << " (reversed on " << reversed << "), closed form error " << fmt(closed_err)
    << " (rule " << (closed.kinds_ok ? "holds" : "fails") << "), degenerate case "
    << (flat_ok ? "ok" : "not ok");
  const bool pass = located == pairs && classified == pairs && closed_err < kClosedFormTol && closed.kinds_ok &&
                    flat_ok;
  return {pass, d.str()};
}

Outcome caseb() {
  const auto grid = lemmas::midpoint_grid(kCaseBNodes);
  int feasible = 0;
  double min_c = 1.0;
  for (double beta : {0.5, 1.0, 2.0, 3.0}) {
    const auto r = lemmas::lemma1_caseb_exclusion(beta, grid);
    feasible += r.feasible;
    min_c = std::min(min_c, r.min_constraint);
  }
  return {feasible == 0, "4 x " + std::to_string(kCaseBNodes) + " nodes, feasible " + std::to_string(feasible) +
                             ", min |constraint| " + fmt(min_c)};
}

Outcome admissible() {
  double mp_err = 0.0;
  double brute_err = 0.0;
  double chi_err = 0.0;
  double area_err = 0.0;
  for_grid([&](double a, double b, double t) {
    const auto spec = ConeAngleSpec::make(a, b);
    const auto v = admissibility::family_vector(spec);
    const double mp = admissibility::mp_distance(v);
    std::vector<double> x;
    for (double bj : v.beta) x.push_back(bj - 1.0);
    mp_err = std::max(mp_err, std::abs(mp - 1.0));
    brute_err = std::max(brute_err, std::abs(mp - oracle::brute_force_odd_sum(x, 3)));
    const double c = admissibility::chi(v);
    chi_err = std::max(chi_err, std::abs(c - (a + b) / kPi));
    area_err = std::max(area_err, std::abs(total_area(glued_football({spec, t})) - kTwoPi * c));
  });
  return {mp_err < kMpTol && brute_err < kMpTol && chi_err < kChiTol && area_err < kAreaTol,
          "mp error " + fmt(mp_err) + ", vs brute force " + fmt(brute_err) + ", chi " + fmt(chi_err) +
              ", area " + fmt(area_err)};
}

Outcome eigen() {
  const double res = eigencheck::radial_residual({1001, 0.1});
  const auto study = eigencheck::convergence_study({1001, 0.1}, 4);
  bool orders_ok = true;
  std::ostringstream d;
  d << "residual " << fmt(res) << ", orders";
  for (double p : study.orders) {
    orders_ok = orders_ok && p >= kOrderLo && p <= kOrderHi;
    d << " " << fmt(p);
  }
  double mismatch = 0.0;
  for (double t : {0.3, kPi / 2, 2.5}) mismatch = std::max(mismatch, eigencheck::slit_continuity(1.0, 2.0, t).max_mismatch);
  d << ", slit mismatch " << mismatch;
  return {res < kEigenResidualTol && orders_ok && mismatch == 0.0, d.str()};
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> runs{
      {"construct", "--alpha", "1.0", "--beta", "2.0", "--t", "1.2"},
      {"rigidity", "--samples", "50", "--workers", "4"},
      {"scan", "--grid", "7", "--eps-count", "3", "--workers", "4"},
      {"lemmas", "--suite", "all", "--ell-nodes", "50", "--caseb-nodes", "100", "--workers", "4"},
      {"eigen"},
      {"admissible", "--alpha", "1.0", "--beta", "2.0"},
  };
  int identical = 0;
  for (const auto& args : runs) {
    std::ostringstream o1, e1, o2, e2;
    const int c1 = cli::run(args, o1, e1);
    const int c2 = cli::run(args, o2, e2);
    identical += c1 == c2 && o1.str() == o2.str() && e1.str() == e2.str() && !o1.str().empty();
  }
  return {identical == static_cast<int>(runs.size()),
          std::to_string(identical) + "/" + std::to_string(runs.size()) + " commands byte-identical"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "family realization", family_realization},
      {2, "rigidity", rigidity},
      {3, "jacobian degeneracy", jacobian_degeneracy},
      {4, "half-piece defect signs", lemma2_signs},
      {5, "isosceles extremality", lemma3},
      {6, "unequal-leg exclusion", caseb},
      {7, "admissibility", admissible},
      {8, "eigenfunction", eigen},
      {9, "determinism", determinism},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    only = std::stoi(argv[2]);
  } else if (argc != 1) {
    std::cerr << "usage: acceptance [--criterion N]\n";
    return 2;
  }
  bool ok = true;
  bool ran = false;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= kSuiteSeconds) {
      o.passed = false;
      o.detail += " (too slow)";
    }
    std::cout << (o.passed ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << ": " << o.detail << " ["
              << fmt(secs) << " s]\n";
    ok = ok && o.passed;
  }
  if (!ran) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return ok ? 0 : 1;
}
