#include "sphcone/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sphcone/errors.hpp"
#include "sphcone/parallel.hpp"

namespace sphcone::lemmas {

using sphtrig::angles_from_sss;
using sphtrig::side_from_sas;

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_open(double x, double lo, double hi, const std::string& name) {
  if (!(x > lo && x < hi)) {
    throw RangeError(name + " = " + fmt(x) + " outside (" + fmt(lo) + ", " + fmt(hi) + ")");
  }
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

HalfPiece half_piece_solve(const HalfPieceConfig& c) {
  require_open(c.apex_half, 0.0, kPi, "apex_half");
  require_open(c.d_half, 0.0, kPi, "d_half");
  require_open(c.ell, 0.0, kPi, "ell");

  HalfPiece out;
  out.side = sphtrig::sine_rule_side(c.apex_half, c.ell, c.d_half, c.branch);
  const double base = side_from_sas(c.ell, c.ell, 2.0 * c.d_half);
  const double at_apex = angles_from_sss({base, out.side, out.side}).B;
  const double at_d = angles_from_sss({base, c.ell, c.ell}).B;
  out.corner = at_apex + at_d;
  out.corner_napier = sphtrig::napier_corner(c.apex_half, c.d_half, c.ell, out.side);
  if (!(std::abs(out.corner - out.corner_napier) <= kCornerAgreementTol)) {
    throw NumericalError("half piece corner: SSS " + fmt(out.corner) + " vs Napier " +
                         fmt(out.corner_napier));
  }
  return out;
}

std::string to_string(Regime r) { return r == Regime::below ? "below" : "above"; }

Regime parse_regime(const std::string& s) {
  if (s == "below") return Regime::below;
  if (s == "above") return Regime::above;
  throw RangeError("regime must be 'below' or 'above', got '" + s + "'");
}

Branch regime_branch(Regime r) { return r == Regime::below ? Branch::acute : Branch::obtuse; }

int inequality_sign(double ell, double l1, double l2) {
  return sign_of(std::sin(ell) * std::cos(ell) * std::sin(0.5 * (l1 - l2)));
}

int expected_defect_sign(Regime regime, double eps) {
  return eps == 0.0 ? 0 : (regime == Regime::below ? -1 : 1);
}

DefectResult asymmetric_defect(double alpha, double beta, double eps, double ell, Regime regime) {
  require_open(alpha, 0.0, kPi, "alpha");
  require_open(beta, 0.0, kPi, "beta");
  require_open(alpha - 2.0 * eps, 0.0, kPi, "alpha - 2 eps");
  require_open(beta + 2.0 * eps, 0.0, kPi, "beta + 2 eps");
  if (regime == Regime::below) {
    require_open(ell, 0.5 * kPi, kPi, "ell (below regime)");
  } else {
    require_open(ell, 0.0, 0.5 * kPi, "ell (above regime)");
  }
  const Branch branch = regime_branch(regime);
  const HalfPiece p1 = half_piece_solve({0.5 * alpha, 0.5 * alpha - eps, ell, branch});
  const HalfPiece p2 = half_piece_solve({0.5 * beta, 0.5 * beta + eps, ell, branch});

  DefectResult r;
  r.l1 = p1.side;
  r.l2 = p2.side;
  r.alpha1 = p1.corner;
  r.alpha2 = p2.corner;
  r.defect = 2.0 * (p1.corner + p2.corner) - 2.0 * kTwoPi;
  r.product = std::sin(ell) * std::cos(ell) * std::sin(0.5 * (r.l1 - r.l2));
  r.corner_gap = std::max(std::abs(p1.corner - p1.corner_napier), std::abs(p2.corner - p2.corner_napier));
  return r;
}

DefectResult lemma2_defect(double beta, double eps, double ell, Regime regime) {
  return asymmetric_defect(beta, beta, eps, ell, regime);
}

std::vector<double> regime_ell_grid(Regime regime, int n, double margin) {
  if (n < 1) throw RangeError("ell grid needs at least one node");
  const double lo = regime == Regime::below ? 0.5 * kPi + margin : margin;
  const double hi = regime == Regime::below ? kPi - margin : 0.5 * kPi - margin;
  if (!(lo < hi)) throw RangeError("ell grid margin " + fmt(margin) + " leaves an empty range");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (n - 1);
  return out;
}

DefectSweep defect_sweep(double alpha, double beta, const std::vector<double>& eps,
                         const std::vector<double>& ell_grid, Regime regime, int workers,
                         double margin) {
  DefectSweep sweep;
  sweep.alpha = alpha;
  sweep.beta = beta;
  sweep.regime = regime;
  sweep.margin = margin;
  const std::size_t ne = ell_grid.size();
  sweep.nodes.resize(eps.size() * ne);
  parallel_for(sweep.nodes.size(), workers, [&](std::size_t i) {
    DefectNode& node = sweep.nodes[i];
    node.eps = eps[i / ne];
    node.ell = ell_grid[i % ne];
    try {
      node.result = asymmetric_defect(alpha, beta, node.eps, node.ell, regime);
      node.feasible = true;
    } catch (const NoTriangleError&) {
    } catch (const ValidityError&) {
    } catch (const DegeneracyError&) {
    }
    if (!node.feasible) return;
    const double d = node.result.defect;
    const double p = node.result.product;
    node.sign_ok = expected_defect_sign(regime, node.eps) * d > margin;
    node.product_ok = std::abs(d) > margin && std::abs(p) > margin && sign_of(d) == sign_of(p);
  });

  sweep.min_defect = std::numeric_limits<double>::infinity();
  sweep.max_defect = -std::numeric_limits<double>::infinity();
  for (const auto& node : sweep.nodes) {
    if (!node.feasible) {
      ++sweep.infeasible;
      continue;
    }
    ++sweep.feasible;
    sweep.sign_ok += node.sign_ok;
    sweep.product_ok += node.product_ok;
    sweep.min_defect = std::min(sweep.min_defect, node.result.defect);
    sweep.max_defect = std::max(sweep.max_defect, node.result.defect);
    sweep.max_corner_gap = std::max(sweep.max_corner_gap, node.result.corner_gap);
  }
  if (sweep.feasible == 0) {
    sweep.min_defect = std::numeric_limits<double>::quiet_NaN();
    sweep.max_defect = std::numeric_limits<double>::quiet_NaN();
  }
  return sweep;
}

DefectSweep step1_asymmetric_exclusion(double alpha, double beta, double eps,
                                       const std::vector<double>& ell_grid, Regime regime,
                                       int workers) {
  return defect_sweep(alpha, beta, {eps}, ell_grid, regime, workers);
}

// ---------------------------------------------------------------------------

std::string to_string(ExtremumKind k) {
  switch (k) {
    case ExtremumKind::minimum: return "minimum";
    case ExtremumKind::maximum: return "maximum";
    case ExtremumKind::degenerate: return "degenerate";
  }
  return "unknown";
}

double lemma3_constraint(double alpha, double s, double ell, double beta) {
  const double u = s - alpha;
  return -std::cos(alpha) * std::cos(u) + std::sin(alpha) * std::sin(u) * std::cos(ell) - std::cos(beta);
}

std::vector<double> lemma3_roots(double alpha, double ell, double beta, int cells) {
  constexpr double kEdge = 1e-9;
  const double lo = kEdge;
  const double hi = kPi - kEdge;
  auto f = [&](double u) { return lemma3_constraint(alpha, alpha + u, ell, beta); };
  std::vector<double> roots;
  double u_prev = lo;
  double f_prev = f(lo);
  if (f_prev == 0.0) roots.push_back(alpha + lo);
  for (int i = 1; i <= cells; ++i) {
    const double u = lo + (hi - lo) * i / cells;
    const double fu = f(u);
    if (fu == 0.0) {
      roots.push_back(alpha + u);
    } else if (f_prev != 0.0 && (f_prev < 0.0) != (fu < 0.0)) {
      double a = u_prev;
      double b = u;
      double fa = f_prev;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(alpha + 0.5 * (a + b));
    }
    u_prev = u;
    f_prev = fu;
  }
  return roots;
}

double lemma3_slope(double alpha, double s, double ell) {
  const double u = s - alpha;
  const double num = std::sin(alpha) * std::cos(u) + std::cos(alpha) * std::sin(u) * std::cos(ell);
  const double den = std::cos(alpha) * std::sin(u) + std::sin(alpha) * std::cos(u) * std::cos(ell);
  return 1.0 - num / den;
}

bool Lemma3Report::passed(double tol) const {
  if (degenerate) return kinds_ok;
  return !extrema.empty() && kinds_ok && max_isosceles_gap < tol;
}

namespace {

constexpr int kRootCells = 256;

// Root j at alpha if the root count there is `count`.
bool branch_root(double alpha, double ell, double beta, std::size_t count, std::size_t j, double& s) {
  const auto roots = lemma3_roots(alpha, ell, beta, kRootCells);
  if (roots.size() != count) return false;
  s = roots[j];
  return true;
}

// Bisection on the sign of ds/dalpha along branch j.
bool refine_extremum(double a, double b, double ell, double beta, std::size_t count, std::size_t j,
                     ExtremalityResult& out) {
  double sa = 0.0;
  double sb = 0.0;
  if (!branch_root(a, ell, beta, count, j, sa) || !branch_root(b, ell, beta, count, j, sb)) return false;
  double ga = lemma3_slope(a, sa, ell);
  const double gb = lemma3_slope(b, sb, ell);
  if (!std::isfinite(ga) || !std::isfinite(gb) || (ga < 0.0) == (gb < 0.0)) return false;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    double sm = 0.0;
    if (!branch_root(m, ell, beta, count, j, sm)) return false;
    const double gm = lemma3_slope(m, sm, ell);
    if (!std::isfinite(gm)) return false;
    if (gm == 0.0) {
      a = b = m;
      break;
    }
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  out.alpha_crit = 0.5 * (a + b);
  return branch_root(out.alpha_crit, ell, beta, count, j, out.s_crit);
}

}  // namespace

Lemma3Report lemma3_sweep(double ell, double beta, int n) {
  require_open(ell, 0.0, kPi, "ell");
  require_open(beta, 0.0, kPi, "beta");
  if (n < 5) throw RangeError("lemma3 sweep needs at least 5 alpha nodes");

  Lemma3Report rep;
  rep.ell = ell;
  rep.beta = beta;
  rep.n = n;
  rep.degenerate = std::abs(std::cos(ell) - std::cos(beta)) < kDegenerateTol;

  std::vector<double> alphas(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> roots(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    alphas[i] = kPi * static_cast<double>(i + 1) / (n + 1);
    roots[i] = lemma3_roots(alphas[i], ell, beta, kRootCells);
    if (roots[i].empty()) {
      ++rep.skipped_nodes;
    } else {
      ++rep.feasible_nodes;
    }
  }
  if (rep.feasible_nodes == 0) {
    throw NoTriangleError("lemma3 sweep: no alpha node admits a triangle for ell = " + fmt(ell) +
                          ", beta = " + fmt(beta));
  }

  if (rep.degenerate) {
    // Two root branches cross at (pi/2, pi). The point is a saddle of the
    // solution set when, just left and right of pi/2, there are roots on both
    // sides of s = pi.
    constexpr double kOffset = 1e-2;
    constexpr int kFineCells = 4096;
    bool straddles = true;
    for (double a : {0.5 * kPi - kOffset, 0.5 * kPi + kOffset}) {
      const auto r = lemma3_roots(a, ell, beta, kFineCells);
      const bool below = std::any_of(r.begin(), r.end(), [](double s) { return s < kPi; });
      const bool above = std::any_of(r.begin(), r.end(), [](double s) { return s > kPi; });
      straddles = straddles && below && above;
    }
    const double at_center = lemma3_constraint(0.5 * kPi, kPi, ell, beta);
    rep.extrema.push_back({0.5 * kPi, kPi, ExtremumKind::degenerate});
    rep.max_isosceles_gap = 0.0;
    rep.kinds_ok = straddles && std::abs(at_center) < 1e-8;
    return rep;
  }

  // Branch j of a run is the j-th root at every node of a maximal run of
  // nodes with the same positive root count.
  std::size_t i0 = 0;
  while (i0 < alphas.size()) {
    const std::size_t count = roots[i0].size();
    std::size_t i1 = i0;
    while (i1 + 1 < alphas.size() && roots[i1 + 1].size() == count) ++i1;
    for (std::size_t j = 0; j < count && i1 >= i0 + 2; ++j) {
      for (std::size_t k = i0 + 1; k < i1; ++k) {
        const double prev = roots[k - 1][j];
        const double cur = roots[k][j];
        const double next = roots[k + 1][j];
        const bool is_max = cur > prev && cur >= next;
        const bool is_min = cur < prev && cur <= next;
        if (!is_max && !is_min) continue;
        ExtremalityResult e;
        e.kind = is_max ? ExtremumKind::maximum : ExtremumKind::minimum;
        if (!refine_extremum(alphas[k - 1], alphas[k + 1], ell, beta, count, j, e)) {
          ++rep.rejected_candidates;
          continue;
        }
        rep.extrema.push_back(e);
      }
    }
    i0 = i1 + 1;
  }

  rep.kinds_ok = !rep.extrema.empty();
  rep.kinds_reversed = !rep.extrema.empty();
  for (const auto& e : rep.extrema) {
    rep.max_isosceles_gap = std::max(rep.max_isosceles_gap, std::abs(e.alpha_crit - 0.5 * e.s_crit));
    const bool below = e.alpha_crit < 0.5 * kPi;
    const bool above = e.alpha_crit > 0.5 * kPi;
    const bool is_min = e.kind == ExtremumKind::minimum;
    rep.kinds_ok = rep.kinds_ok && (is_min ? below : above);
    rep.kinds_reversed = rep.kinds_reversed && (is_min ? above : below);
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<double> midpoint_grid(int n) {
  if (n < 1) throw RangeError("grid needs at least one node");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = kPi * (k + 0.5) / n;
  return out;
}

CaseBReport lemma1_caseb_exclusion(double beta, const std::vector<double>& l1_grid, int alpha_nodes) {
  require_open(beta, 0.0, kPi, "beta");
  if (alpha_nodes < 1) throw RangeError("alpha scan needs at least one node");
  CaseBReport rep;
  rep.beta = beta;
  rep.min_constraint = std::numeric_limits<double>::infinity();
  const double cb = std::cos(beta);
  for (double l1 : l1_grid) {
    require_open(l1, 0.0, kPi, "l1");
    if (std::abs(l1 - 0.5 * kPi) < 1e-12) {
      throw RangeError("l1 = pi/2 gives equal legs, which is not case (b)");
    }
    CaseBNode node;
    node.l1 = l1;
    node.l2 = kPi - l1;
    const double s1 = std::sin(l1);
    node.cos_l5 = 1.0 + (cb - 1.0) * s1 * s1;
    node.ratio = (node.cos_l5 - 1.0) / (cb - 1.0);
    node.reversed_ratio = (cb - 1.0) / (node.cos_l5 - 1.0);
    node.min_constraint = std::numeric_limits<double>::infinity();
    for (int k = 0; k < alpha_nodes; ++k) {
      const double sa = std::sin(kPi * (k + 0.5) / alpha_nodes);
      node.min_constraint =
          std::min(node.min_constraint, std::abs(1.0 + (node.cos_l5 - 1.0) * sa * sa - cb));
    }
    node.feasible = node.reversed_ratio <= 1.0 || node.min_constraint <= 1e-12;
    rep.feasible += node.feasible;
    rep.min_constraint = std::min(rep.min_constraint, node.min_constraint);
    rep.nodes.push_back(node);
  }
  return rep;
}

}  // namespace sphcone::lemmas
