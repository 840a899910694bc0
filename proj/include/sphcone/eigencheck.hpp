#pragma once

// Finite-difference check that cos r is an eigenfunction of the Laplacian of
// a football dr^2 + (alpha sin r)^2 dtheta^2 with eigenvalue 2, and that it
// agrees on the two sides of the slit.

#include <cmath>
#include <functional>
#include <vector>

namespace sphcone::eigencheck {

/// n uniform nodes on [delta, pi - delta].
struct RadialGrid {
  int n = 1001;
  double delta = 0.1;

  void validate() const;
  double spacing() const;
  double node(int i) const;
};

using RadialFunction = std::function<double(double)>;

/// max over interior nodes of |u'' + (J'/J) u' + 2 u| with J = alpha sin r
/// and central differences for u', u''. The result does not depend on alpha
/// beyond rounding.
double radial_residual(const RadialGrid& g, double alpha = 1.0,
                       const RadialFunction& u = [](double r) { return std::cos(r); });

struct ConvergenceStudy {
  std::vector<int> n;             ///< n, 2n-1, 4n-3, ...
  std::vector<double> residuals;
  std::vector<double> orders;     ///< log2 of successive residual ratios
};

/// Residuals on `levels` successively halved grids.
ConvergenceStudy convergence_study(const RadialGrid& g, int levels = 4, double alpha = 1.0);

struct SlitContinuity {
  int samples = 0;
  double max_mismatch = 0.0;
  double value_at_C = 0.0;  ///< end of the slit, -cos t
  double value_at_D = 0.0;  ///< the glued south poles, -1
};

/// Samples n points at distance d in (0, t) from C along the slit and
/// compares cos r evaluated in the alpha football and in the beta football.
SlitContinuity slit_continuity(double alpha, double beta, double t, int n = 100);

}  // namespace sphcone::eigencheck
