#include "sphcone/sphtrig.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sphcone/errors.hpp"

namespace sphcone::sphtrig {
namespace {

bool in_open_range(double x, double lo, double hi) { return x > lo && x < hi; }

void require_angle(double x, const char* name) {
  if (!in_open_range(x, 0.0, kPi)) {
    std::ostringstream os;
    os << name << " = " << x << " outside (0, pi)";
    throw RangeError(os.str());
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::vector<Violation> violations(const SphericalTriangle& t, double margin) {
  std::vector<Violation> out;
  const double s[3] = {t.a, t.b, t.c};
  const char* names[3] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(s[i])) {
      out.push_back({std::string(names[i]) + " is not finite", -INFINITY});
      continue;
    }
    if (s[i] <= margin)
      out.push_back({std::string(names[i]) + " > 0", s[i] - margin});
    if (s[i] >= kPi - margin)
      out.push_back({std::string(names[i]) + " < pi", kPi - margin - s[i]});
  }
  if (!out.empty()) return out;

  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const double slack = s[j] + s[k] - margin - s[i];
    if (slack <= 0.0) {
      out.push_back({std::string(names[i]) + " < " + names[j] + " + " + names[k], slack});
    }
  }
  const double perimeter_slack = kTwoPi - margin - (t.a + t.b + t.c);
  if (perimeter_slack <= 0.0) out.push_back({"a + b + c < 2pi", perimeter_slack});
  return out;
}

bool is_valid(const SphericalTriangle& t, double margin) { return violations(t, margin).empty(); }

void require_valid(const SphericalTriangle& t, int triangle_index) {
  const auto v = violations(t);
  if (v.empty()) return;
  std::ostringstream os;
  if (triangle_index >= 0) os << "T" << (triangle_index + 1) << ": ";
  os << "invalid spherical triangle (" << fmt(t.a) << ", " << fmt(t.b) << ", " << fmt(t.c)
     << "): violates " << v.front().what << " by " << -v.front().slack;
  throw ValidityError(os.str(), triangle_index);
}

double side_from_sas(double a, double b, double C) {
  require_angle(a, "side a");
  require_angle(b, "side b");
  require_angle(C, "angle C");
  const double cos_c = std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(C);
  if (!std::isfinite(cos_c) || std::abs(cos_c) > 1.0 + kClampTol) {
    throw NumericalError("side_from_sas: cosine " + fmt(cos_c) + " outside [-1, 1]");
  }
  // atan2 form of the same law; accurate for c near 0 and near pi.
  const double y = std::hypot(std::sin(b) * std::sin(C),
                              std::sin(a) * std::cos(b) - std::cos(a) * std::sin(b) * std::cos(C));
  return std::atan2(y, cos_c);
}

TriangleAngles angles_from_sss(const SphericalTriangle& t) {
  require_valid(t);
  // Half-angle formulas: tan^2(A/2) = sin(s-b) sin(s-c) / (sin s sin(s-a)).
  const double s = 0.5 * (t.a + t.b + t.c);
  const double ss = std::sin(s);
  const double sa = std::sin(s - t.a);
  const double sb = std::sin(s - t.b);
  const double sc = std::sin(s - t.c);
  TriangleAngles out;
  out.A = 2.0 * std::atan2(std::sqrt(sb * sc), std::sqrt(ss * sa));
  out.B = 2.0 * std::atan2(std::sqrt(sa * sc), std::sqrt(ss * sb));
  out.C = 2.0 * std::atan2(std::sqrt(sa * sb), std::sqrt(ss * sc));
  return out;
}

double dual_cosine_angle(double A, double B, double c) {
  require_angle(A, "angle A");
  require_angle(B, "angle B");
  require_angle(c, "side c");
  double arg = -std::cos(A) * std::cos(B) + std::sin(A) * std::sin(B) * std::cos(c);
  if (!std::isfinite(arg)) throw NumericalError("dual_cosine_angle: non-finite cosine");
  if (std::abs(arg) > 1.0 + kClampTol) {
    throw NoTriangleError("no triangle with angles " + fmt(A) + ", " + fmt(B) +
                          " adjacent to side " + fmt(c));
  }
  arg = std::clamp(arg, -1.0, 1.0);
  const double C = std::acos(arg);
  if (!(C > 0.0 && C < kPi)) {
    throw NoTriangleError("dual_cosine_angle: degenerate apex angle " + fmt(C));
  }
  return C;
}

double napier_corner(double A, double B, double a, double b) {
  require_angle(A, "angle A");
  require_angle(B, "angle B");
  require_angle(a, "side a");
  require_angle(b, "side b");

  constexpr double kSame = 1e-14;
  if (std::abs(A - B) < kSame && std::abs(a - b) < kSame) {
    // Isosceles: the half triangle through the apex is right-angled at the
    // base midpoint, so tan(c/2) = tan(b) cos(A).
    const double num = std::sin(b) * std::cos(A);
    const double den = std::cos(b);
    if (num == 0.0 && den == 0.0) throw DegeneracyError("napier_corner: undetermined base");
    const double half_c = den != 0.0 ? std::atan(num / den) : std::copysign(kPi / 2, num);
    return angles_from_sss({a, b, 2.0 * half_c}).C;
  }
  if (a == b) {
    throw InconsistentDataError("napier_corner: equal sides " + fmt(a) +
                                " opposite unequal angles");
  }
  const double half_diff = std::sin(0.5 * (a - b));
  if (std::abs(half_diff) < 1e-14) {
    throw DegeneracyError("napier_corner: sin((a-b)/2) = " + fmt(half_diff));
  }
  const double cot_half = std::tan(0.5 * (A - B)) * std::sin(0.5 * (a + b)) / half_diff;
  if (!std::isfinite(cot_half)) throw NumericalError("napier_corner: non-finite cotangent");
  return 2.0 * std::atan2(1.0, cot_half);
}

double sine_rule_side(double A, double a, double B, Branch branch) {
  require_angle(A, "angle A");
  require_angle(a, "side a");
  require_angle(B, "angle B");
  double ratio = std::sin(B) * std::sin(a) / std::sin(A);
  if (!std::isfinite(ratio)) throw NumericalError("sine_rule_side: non-finite ratio");
  if (ratio > 1.0 + kClampTol) {
    throw NoTriangleError("sine rule ratio " + fmt(ratio) + " exceeds 1");
  }
  if (ratio <= 0.0) throw RangeError("sine_rule_side: non-positive ratio " + fmt(ratio));
  ratio = std::min(ratio, 1.0);
  const double b = std::asin(ratio);
  return branch == Branch::acute ? b : kPi - b;
}

double triangle_excess(const SphericalTriangle& t) { return angles_from_sss(t).excess(); }

}  // namespace sphcone::sphtrig
