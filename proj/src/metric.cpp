#include "sphcone/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sphcone/errors.hpp"

namespace sphcone {

using sphtrig::SphericalTriangle;

namespace {

bool is_multiple_of_two_pi(double x) {
  const double k = std::round(x / kTwoPi);
  return std::abs(x - k * kTwoPi) < 1e-12;
}

constexpr const char* kLengthNames[6] = {"l1", "l2", "l3", "l4", "l5", "l6"};

}  // namespace

ConeAngleSpec ConeAngleSpec::make(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < kPi) || !(beta > 0.0 && beta < kPi)) {
    std::ostringstream os;
    os.precision(17);
    os << "cone angles (alpha, beta) = (" << alpha << ", " << beta
       << ") outside the supported range (0, pi)";
    throw RangeError(os.str());
  }
  if (is_multiple_of_two_pi(alpha) || is_multiple_of_two_pi(beta) ||
      is_multiple_of_two_pi(alpha + beta)) {
    throw RangeError("cone angles must not be multiples of 2 pi");
  }
  return ConeAngleSpec{alpha, beta};
}

std::array<double, 4> ConeAngleSpec::cone_vector() const {
  return {alpha, beta, alpha + beta, 2.0 * kTwoPi};
}

std::array<double, 4> ConeAngleSpec::normalized() const {
  return {alpha / kTwoPi, beta / kTwoPi, (alpha + beta) / kTwoPi, 2.0};
}

std::array<SphericalTriangle, 4> TriangulatedMetric::triangles() const {
  return {SphericalTriangle{l1(), l1(), l5()}, SphericalTriangle{l3(), l4(), l5()},
          SphericalTriangle{l2(), l2(), l6()}, SphericalTriangle{l4(), l3(), l6()}};
}

double max_norm_distance(const TriangulatedMetric& x, const TriangulatedMetric& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < 6; ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

TriangulatedMetric swap_footballs(const TriangulatedMetric& m) {
  return TriangulatedMetric({m.l2(), m.l1(), m.l3(), m.l4(), m.l6(), m.l5()});
}

TriangulatedMetric glued_football(const GluedFootballParams& p) {
  if (!(p.t > 0.0 && p.t < kPi)) throw RangeError("slit length t outside (0, pi)");
  const double st = std::sin(p.t);
  TriangulatedMetric m({kPi - p.t, kPi - p.t, p.t, p.t,
                        2.0 * std::asin(st * std::sin(0.5 * p.spec.alpha)),
                        2.0 * std::asin(st * std::sin(0.5 * p.spec.beta))});
  require_valid(m);
  return m;
}

ConeAngles cone_angles(const TriangulatedMetric& m, SlitPairing pairing) {
  const auto tri = m.triangles();
  for (int i = 0; i < 4; ++i) sphtrig::require_valid(tri[i], i);

  // Each call lists the side opposite the apex first, then the sides
  // opposite the two C corners.
  const auto t1 = sphtrig::angles_from_sss({m.l5(), m.l1(), m.l1()});  // A, C1, C2
  const auto t2 = sphtrig::angles_from_sss({m.l5(), m.l4(), m.l3()});  // D1, C1, C2
  const auto t3 = sphtrig::angles_from_sss({m.l6(), m.l2(), m.l2()});  // B, C3, C4
  const auto t4 = pairing == SlitPairing::canonical
                      ? sphtrig::angles_from_sss({m.l6(), m.l3(), m.l4()})   // D2, C3, C4
                      : sphtrig::angles_from_sss({m.l6(), m.l4(), m.l3()});

  ConeAngles out;
  out.theta_A = t1.A;
  out.theta_B = t3.A;
  out.theta_D = t2.A + t4.A;
  out.corner_totals = {t1.B + t2.B, t1.C + t2.C, t3.B + t4.B, t3.C + t4.C};
  out.theta_C = (out.corner_totals[0] + out.corner_totals[1]) +
                (out.corner_totals[2] + out.corner_totals[3]);
  return out;
}

std::vector<MetricViolation> validate(const TriangulatedMetric& m) {
  std::vector<MetricViolation> out;
  bool ranges_ok = true;
  for (std::size_t i = 0; i < 6; ++i) {
    const double x = m[i];
    const std::string name = kLengthNames[i];
    if (!std::isfinite(x)) {
      out.push_back({-1, name + " is not finite", -INFINITY});
      ranges_ok = false;
    } else if (x <= sphtrig::kValidityMargin) {
      out.push_back({-1, name + " > 0", x - sphtrig::kValidityMargin});
      ranges_ok = false;
    } else if (x >= kPi - sphtrig::kValidityMargin) {
      out.push_back({-1, name + " < pi", kPi - sphtrig::kValidityMargin - x});
      ranges_ok = false;
    }
  }
  if (!ranges_ok) return out;
  const auto tri = m.triangles();
  for (int i = 0; i < 4; ++i) {
    for (const auto& v : sphtrig::violations(tri[i])) {
      out.push_back({i, "T" + std::to_string(i + 1) + ": " + v.what, v.slack});
    }
  }
  return out;
}

void require_valid(const TriangulatedMetric& m) {
  const auto v = validate(m);
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid triangulated metric: " << v.front().what << " violated by " << -v.front().slack;
  throw ValidityError(os.str(), v.front().triangle);
}

double total_area(const TriangulatedMetric& m) {
  const auto tri = m.triangles();
  double area = 0.0;
  for (int i = 0; i < 4; ++i) {
    sphtrig::require_valid(tri[i], i);
    area += sphtrig::triangle_excess(tri[i]);
  }
  return area;
}

std::string serialize(const TriangulatedMetric& m, const ConeAngleSpec& spec) {
  require_valid(m);
  nlohmann::json doc;
  doc["spec"] = {{"alpha", spec.alpha}, {"beta", spec.beta}};
  for (std::size_t i = 0; i < 6; ++i) doc["lengths"][kLengthNames[i]] = m[i];
  return doc.dump(2) + "\n";
}

namespace {

double number_field(const nlohmann::json& obj, const std::string& section, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"", section + "." + key);
  if (!it->is_number()) {
    throw ParseError(std::string("field \"") + key + "\" is not a number", section + "." + key);
  }
  return it->get<double>();
}

const nlohmann::json& object_field(const nlohmann::json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(std::string("missing field \"") + key + "\"", key);
  if (!it->is_object()) throw ParseError(std::string("field \"") + key + "\" is not an object", key);
  return *it;
}

}  // namespace

MetricDocument parse_metric_document(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), "byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) throw ParseError("document is not an object", "root");
  const auto& spec = object_field(doc, "spec");
  const auto& lengths = object_field(doc, "lengths");
  MetricDocument out;
  out.spec.alpha = number_field(spec, "spec", "alpha");
  out.spec.beta = number_field(spec, "spec", "beta");
  for (std::size_t i = 0; i < 6; ++i) out.metric[i] = number_field(lengths, "lengths", kLengthNames[i]);
  return out;
}

MetricDocument deserialize(const std::string& text) {
  MetricDocument out = parse_metric_document(text);
  out.spec = ConeAngleSpec::make(out.spec.alpha, out.spec.beta);
  for (std::size_t i = 0; i < 6; ++i) {
    const double x = out.metric[i];
    if (!(x > 0.0 && x < kPi)) {
      std::ostringstream os;
      os.precision(17);
      os << kLengthNames[i] << " = " << x << " outside (0, pi)";
      throw RangeError(os.str());
    }
  }
  require_valid(out.metric);
  return out;
}

}  // namespace sphcone
