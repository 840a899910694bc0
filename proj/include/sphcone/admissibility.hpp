#pragma once

// Angle-data bookkeeping for conical metrics: conic Euler characteristic and
// the L1 distance from beta - 1 to the odd integer lattice.

#include <vector>

#include "sphcone/metric.hpp"

namespace sphcone::admissibility {

/// Normalized cone angles beta_j (cone angle 2 pi beta_j), all positive.
struct AngleVector {
  std::vector<double> beta;
};

/// (alpha, beta, alpha + beta, 4 pi) / 2 pi.
AngleVector family_vector(const ConeAngleSpec& spec);

/// euler_base + sum_j (beta_j - 1). The sphere has euler_base = 2.
double chi(const AngleVector& v, int euler_base = 2);

/// Lattice of integer vectors the distance is measured to.
enum class OddLattice {
  odd_sum,  ///< coordinate sum is odd (default)
  all_odd,  ///< every coordinate is odd
};

struct LatticeProjection {
  std::vector<long long> point;
  double distance = 0.0;
};

/// Nearest lattice point in L1 to beta - 1. For odd_sum: round every
/// coordinate, and if the sum is even move the single coordinate with the
/// smallest cost increase to its second-nearest integer (lowest index on
/// ties). Empty input has no odd-sum point and yields distance +inf.
LatticeProjection nearest_odd_point(const AngleVector& v, OddLattice lattice = OddLattice::odd_sum);

double mp_distance(const AngleVector& v, OddLattice lattice = OddLattice::odd_sum);

}  // namespace sphcone::admissibility
