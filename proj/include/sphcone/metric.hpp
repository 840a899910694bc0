#pragma once

// Triangulated conical metrics on the sphere with cone points A, B, D, C.
//
// The surface is cut into two four-sided pieces, A C1 D1 C2 and B C3 D2 C4,
// and each piece is split by a diagonal into two triangles:
//
//   T1 = A  C1 C2   sides (l1, l1, l5)
//   T2 = D1 C1 C2   sides (l3, l4, l5)   |C1D1| = l3, |C2D1| = l4
//   T3 = B  C3 C4   sides (l2, l2, l6)
//   T4 = D2 C3 C4   sides (l4, l3, l6)   |C3D2| = l4, |C4D2| = l3
//
// The slit glues C1D1 to C4D2 and C2D1 to C3D2. C1..C4 glue to the cone point
// C and D1, D2 to D.

#include <array>
#include <string>
#include <vector>

#include "sphcone/sphtrig.hpp"

namespace sphcone {

/// Target cone angles (alpha, beta, alpha + beta, 4 pi).
struct ConeAngleSpec {
  double alpha = 0.0;
  double beta = 0.0;

  /// Validated constructor; throws RangeError outside 0 < alpha, beta < pi.
  static ConeAngleSpec make(double alpha, double beta);

  std::array<double, 4> cone_vector() const;
  /// Cone angles divided by 2 pi.
  std::array<double, 4> normalized() const;
};

using Lengths = std::array<double, 6>;

class TriangulatedMetric {
 public:
  TriangulatedMetric() = default;
  explicit TriangulatedMetric(const Lengths& l) : l_(l) {}

  const Lengths& lengths() const { return l_; }
  Lengths& lengths() { return l_; }
  double operator[](std::size_t i) const { return l_[i]; }
  double& operator[](std::size_t i) { return l_[i]; }

  double l1() const { return l_[0]; }
  double l2() const { return l_[1]; }
  double l3() const { return l_[2]; }
  double l4() const { return l_[3]; }
  double l5() const { return l_[4]; }
  double l6() const { return l_[5]; }

  /// T1..T4 as listed in the header comment.
  std::array<sphtrig::SphericalTriangle, 4> triangles() const;

  bool operator==(const TriangulatedMetric&) const = default;

 private:
  Lengths l_{};
};

/// Max-norm distance on (l1..l6).
double max_norm_distance(const TriangulatedMetric& x, const TriangulatedMetric& y);

/// Relabeling that exchanges the two footballs (l1<->l2, l5<->l6).
TriangulatedMetric swap_footballs(const TriangulatedMetric& m);

struct GluedFootballParams {
  ConeAngleSpec spec;
  double t = 0.0;  ///< slit length, 0 < t < pi
};

/// Glues a football of angle alpha to one of angle beta along a slit of
/// length t ending at their south poles.
TriangulatedMetric glued_football(const GluedFootballParams& p);

/// Total angles at the four cone points.
struct ConeAngles {
  double theta_A = 0.0;
  double theta_B = 0.0;
  double theta_D = 0.0;
  double theta_C = 0.0;
  /// Per-corner totals at C1, C2 (piece A) and C3, C4 (piece B).
  std::array<double, 4> corner_totals{};
};

/// Which slit edges are identified. The alternative swaps the roles of C3
/// and C4 on the B piece (T4 = (l3, l4, l6)).
enum class SlitPairing { canonical, alternative };

ConeAngles cone_angles(const TriangulatedMetric& m, SlitPairing pairing = SlitPairing::canonical);

struct MetricViolation {
  int triangle = -1;  ///< 0..3, or -1 for a per-length range violation
  std::string what;
  double slack = 0.0;
};

/// Every violated invariant; empty iff the metric is valid.
std::vector<MetricViolation> validate(const TriangulatedMetric& m);

/// Throws ValidityError tagged with the first offending triangle.
void require_valid(const TriangulatedMetric& m);

/// Sum of the four triangle areas.
double total_area(const TriangulatedMetric& m);

struct MetricDocument {
  TriangulatedMetric metric;
  ConeAngleSpec spec;
};

/// Metric document text:
///   {"lengths": {"l1": ..., ..., "l6": ...}, "spec": {"alpha": ..., "beta": ...}}
std::string serialize(const TriangulatedMetric& m, const ConeAngleSpec& spec);

/// Parses and range-checks a metric document. Throws ParseError for malformed
/// text or missing fields and ValidityError/RangeError for out-of-range values.
MetricDocument deserialize(const std::string& text);

/// Parses without any range or validity checks.
MetricDocument parse_metric_document(const std::string& text);

}  // namespace sphcone
