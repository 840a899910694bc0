#include "sphcone/eigencheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphcone/errors.hpp"
#include "sphcone/sphtrig.hpp"

namespace sphcone::eigencheck {

void RadialGrid::validate() const {
  if (n < 3) throw RangeError("radial grid needs n >= 3, got " + std::to_string(n));
  if (!(delta > 0.0 && delta < 0.5 * kPi)) throw RangeError("delta must lie in (0, pi/2)");
  if (!std::isfinite(1.0 / std::tan(delta))) throw RangeError("delta too small: cot(delta) overflows");
}

double RadialGrid::spacing() const { return (kPi - 2.0 * delta) / (n - 1); }

double RadialGrid::node(int i) const { return delta + i * spacing(); }

double radial_residual(const RadialGrid& g, double alpha, const RadialFunction& u) {
  g.validate();
  if (!(alpha > 0.0)) throw RangeError("cone angle must be positive");
  const double h = g.spacing();
  std::vector<double> v(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) v[static_cast<std::size_t>(i)] = u(g.node(i));
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double r = g.node(static_cast<int>(i));
    const double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    const double d1 = (v[i + 1] - v[i - 1]) / (2.0 * h);
    const double jac = alpha * std::sin(r);
    const double djac = alpha * std::cos(r);
    worst = std::max(worst, std::abs(d2 + djac / jac * d1 + 2.0 * v[i]));
  }
  return worst;
}

ConvergenceStudy convergence_study(const RadialGrid& g, int levels, double alpha) {
  if (levels < 2) throw RangeError("convergence study needs at least two levels");
  ConvergenceStudy out;
  RadialGrid cur = g;
  for (int k = 0; k < levels; ++k) {
    out.n.push_back(cur.n);
    out.residuals.push_back(radial_residual(cur, alpha));
    cur.n = 2 * cur.n - 1;
  }
  for (std::size_t k = 0; k + 1 < out.residuals.size(); ++k) {
    out.orders.push_back(std::log2(out.residuals[k] / out.residuals[k + 1]));
  }
  return out;
}

namespace {

// Radial coordinate from the north pole of a football at distance
// `from_south` from its south pole. The cone angle does not enter.
double radial_coordinate(double /*cone_angle*/, double from_south) { return kPi - from_south; }

}  // namespace

SlitContinuity slit_continuity(double alpha, double beta, double t, int n) {
  if (!(t > 0.0 && t < kPi)) throw RangeError("slit length must lie in (0, pi)");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw RangeError("cone angles must be positive");
  if (n < 1) throw RangeError("slit continuity needs at least one sample");
  SlitContinuity out;
  out.samples = n;
  for (int k = 0; k < n; ++k) {
    const double d = t * (k + 0.5) / n;
    const double on_alpha = std::cos(radial_coordinate(alpha, t - d));
    const double on_beta = std::cos(radial_coordinate(beta, t - d));
    out.max_mismatch = std::max(out.max_mismatch, std::abs(on_alpha - on_beta));
  }
  out.value_at_C = std::cos(radial_coordinate(alpha, t));
  out.value_at_D = std::cos(radial_coordinate(alpha, 0.0));
  return out;
}

}  // namespace sphcone::eigencheck
