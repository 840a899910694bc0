#include "sphcone/admissibility.hpp"

#include <cmath>
#include <limits>

#include "sphcone/errors.hpp"

namespace sphcone::admissibility {

AngleVector family_vector(const ConeAngleSpec& spec) {
  const auto n = spec.normalized();
  return AngleVector{{n.begin(), n.end()}};
}

double chi(const AngleVector& v, int euler_base) {
  double sum = 0.0;
  for (double b : v.beta) sum += b - 1.0;
  return static_cast<double>(euler_base) + sum;
}

namespace {

long long nearest_odd_integer(double x) {
  // Odd integers are 2k + 1; round (x - 1) / 2.
  return 2 * static_cast<long long>(std::floor((x - 1.0) / 2.0 + 0.5)) + 1;
}

}  // namespace

LatticeProjection nearest_odd_point(const AngleVector& v, OddLattice lattice) {
  for (double b : v.beta) {
    if (!(b > 0.0) || !std::isfinite(b)) throw RangeError("angle vector entries must be positive");
  }
  LatticeProjection out;
  const std::size_t k = v.beta.size();
  out.point.resize(k);
  if (k == 0) {
    out.distance = lattice == OddLattice::odd_sum ? std::numeric_limits<double>::infinity() : 0.0;
    return out;
  }

  double cost = 0.0;
  if (lattice == OddLattice::all_odd) {
    for (std::size_t j = 0; j < k; ++j) {
      const double x = v.beta[j] - 1.0;
      out.point[j] = nearest_odd_integer(x);
      cost += std::abs(x - static_cast<double>(out.point[j]));
    }
    out.distance = cost;
    return out;
  }

  long long sum = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double x = v.beta[j] - 1.0;
    out.point[j] = std::llround(x);
    sum += out.point[j];
    cost += std::abs(x - static_cast<double>(out.point[j]));
  }
  if (sum % 2 == 0) {
    // Moving to the second-nearest integer costs 1 - 2|x - m|.
    std::size_t best = 0;
    double best_increase = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const double r = v.beta[j] - 1.0 - static_cast<double>(out.point[j]);
      const double increase = 1.0 - 2.0 * std::abs(r);
      if (increase < best_increase) {
        best_increase = increase;
        best = j;
      }
    }
    const double r = v.beta[best] - 1.0 - static_cast<double>(out.point[best]);
    out.point[best] += r >= 0.0 ? 1 : -1;
  }
  out.distance = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    out.distance += std::abs(v.beta[j] - 1.0 - static_cast<double>(out.point[j]));
  }
  return out;
}

double mp_distance(const AngleVector& v, OddLattice lattice) {
  return nearest_odd_point(v, lattice).distance;
}

}  // namespace sphcone::admissibility
