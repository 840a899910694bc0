#pragma once

// Spherical trigonometry on the unit sphere. All quantities are radians.

#include <numbers>
#include <string>
#include <vector>

namespace sphcone {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace sphtrig {

/// Allowance for arccos/arcsin arguments that overshoot +-1 by rounding.
inline constexpr double kClampTol = 1e-12;
/// Margin applied to every strict triangle inequality.
inline constexpr double kValidityMargin = 1e-10;

/// Three side lengths. Not validated on construction; see `violations`.
struct SphericalTriangle {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Interior angles; A is opposite side a, and so on.
struct TriangleAngles {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  double excess() const { return A + B + C - kPi; }
};

/// Selects the solution of sin(x) = y in (0, pi/2] or [pi/2, pi).
enum class Branch { acute, obtuse };

/// One violated triangle invariant. `slack` is negative: the amount by which
/// the inequality (including the margin) fails.
struct Violation {
  std::string what;
  double slack = 0.0;
};

/// Every violated invariant of `t`; empty iff the triangle is valid.
std::vector<Violation> violations(const SphericalTriangle& t,
                                  double margin = kValidityMargin);

bool is_valid(const SphericalTriangle& t, double margin = kValidityMargin);

/// Throws ValidityError naming the first violated inequality.
void require_valid(const SphericalTriangle& t, int triangle_index = -1);

/// Third side opposite the included angle C (spherical law of cosines).
double side_from_sas(double a, double b, double C);

/// Interior angles of a valid triangle.
TriangleAngles angles_from_sss(const SphericalTriangle& t);

/// Angle C opposite side c given the two adjacent angles A and B
/// (polar law of cosines). Throws NoTriangleError when the data admit no
/// triangle.
double dual_cosine_angle(double A, double B, double c);

/// Third angle from two angles and their opposite sides by Napier's analogy
///   cot(C/2) = tan((A-B)/2) sin((a+b)/2) / sin((a-b)/2).
///
/// The result lies in (0, 2pi): for proper triangles it is the interior angle
/// in (0, pi); values above pi describe a generalized triangle whose corner at
/// C is reflex. The isosceles case A = B, a = b is closed through the SSS path.
double napier_corner(double A, double B, double a, double b);

/// Side b opposite angle B from sin b = sin B sin a / sin A.
double sine_rule_side(double A, double a, double B, Branch branch);

/// Area of a valid triangle (spherical excess).
double triangle_excess(const SphericalTriangle& t);

}  // namespace sphtrig
}  // namespace sphcone
