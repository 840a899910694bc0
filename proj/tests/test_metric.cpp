#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "oracles.hpp"
#include "sphcone/errors.hpp"
#include "sphcone/metric.hpp"

using namespace sphcone;

namespace {

TriangulatedMetric football(double alpha, double beta, double t) {
  return glued_football({ConeAngleSpec::make(alpha, beta), t});
}

// Cone angles measured on triangles embedded in R^3.
struct Measured {
  double A, B, D, C;
};

Measured measure(const TriangulatedMetric& m) {
  const auto t1 = oracle::angles_3d(m.l1(), m.l1(), m.l5());
  const auto t2 = oracle::angles_3d(m.l3(), m.l4(), m.l5());
  const auto t3 = oracle::angles_3d(m.l2(), m.l2(), m.l6());
  const auto t4 = oracle::angles_3d(m.l4(), m.l3(), m.l6());
  return {t1[2], t3[2], t2[2] + t4[2],
          t1[0] + t1[1] + t2[0] + t2[1] + t3[0] + t3[1] + t4[0] + t4[1]};
}

}  // namespace

TEST_SUITE("metric") {
  TEST_CASE("ConeAngleSpec") {
    const auto s = ConeAngleSpec::make(1.0, 2.0);
    const auto v = s.cone_vector();
    CHECK(v[2] == 3.0);
    CHECK(v[3] == doctest::Approx(4 * kPi));
    CHECK(s.normalized()[3] == doctest::Approx(2.0));
    CHECK_THROWS_AS(ConeAngleSpec::make(0.0, 1.0), RangeError);
    CHECK_THROWS_AS(ConeAngleSpec::make(1.0, kPi), RangeError);
    CHECK_THROWS_AS(ConeAngleSpec::make(std::nan(""), 1.0), RangeError);
  }

  TEST_CASE("glued football closed forms") {
    const auto g = football(kPi / 2, kPi / 2, kPi / 3);
    CHECK(g.l1() == doctest::Approx(2 * kPi / 3).epsilon(1e-15));
    CHECK(g.l2() == doctest::Approx(2 * kPi / 3).epsilon(1e-15));
    CHECK(g.l3() == doctest::Approx(kPi / 3).epsilon(1e-15));
    CHECK(g.l4() == doctest::Approx(kPi / 3).epsilon(1e-15));
    CHECK(g.l5() == doctest::Approx(std::acos(0.25)).epsilon(1e-14));
    CHECK(g.l6() == g.l5());
    CHECK(g.l5() == doctest::Approx(1.318116).epsilon(1e-6));
    CHECK_THROWS_AS(football(1.0, 1.0, 0.0), RangeError);
    CHECK_THROWS_AS(football(1.0, 1.0, kPi), RangeError);
  }

  TEST_CASE("glued football structure") {
    oracle::SplitMix rng{21};
    for (int i = 0; i < 200; ++i) {
      const double a = rng.uniform(0.2, kPi - 0.2);
      const double b = rng.uniform(0.2, kPi - 0.2);
      const double t = rng.uniform(0.1, kPi - 0.1);
      const auto g = football(a, b, t);
      CHECK(g.l3() == g.l4());
      CHECK(g.l1() == g.l2());
      CHECK(std::abs(g.l3() - (kPi - g.l1())) < 1e-15);
      CHECK(std::abs(football(a, a, t).l5() - football(a, a, t).l6()) == 0.0);
      // The base of T1 is the chord subtending angle a at distance l1 from A.
      CHECK(std::abs(g.l5() - oracle::sas_3d(g.l1(), g.l1(), a)) < 1e-12);
      CHECK(std::abs(g.l6() - oracle::sas_3d(g.l2(), g.l2(), b)) < 1e-12);
      CHECK(validate(g).empty());
    }
  }

  TEST_CASE("cone angles of the family match the 3D measurement") {
    oracle::SplitMix rng{22};
    for (int i = 0; i < 200; ++i) {
      const double a = rng.uniform(0.3, kPi - 0.3);
      const double b = rng.uniform(0.3, kPi - 0.3);
      const double t = rng.uniform(0.2, kPi - 0.2);
      const auto g = football(a, b, t);
      const auto got = cone_angles(g);
      const auto ref = measure(g);
      CHECK(std::abs(got.theta_A - a) < 1e-10);
      CHECK(std::abs(got.theta_B - b) < 1e-10);
      CHECK(std::abs(got.theta_D - (a + b)) < 1e-10);
      CHECK(std::abs(got.theta_C - 4 * kPi) < 1e-10);
      CHECK(std::abs(ref.A - a) < 1e-8);
      CHECK(std::abs(ref.B - b) < 1e-8);
      CHECK(std::abs(ref.D - (a + b)) < 1e-8);
      CHECK(std::abs(ref.C - 4 * kPi) < 1e-8);
      double corners = 0.0;
      for (double c : got.corner_totals) corners += c;
      CHECK(std::abs(corners - got.theta_C) < 1e-12);
    }
  }

  TEST_CASE("cone angles of a generic metric match the 3D measurement") {
    oracle::SplitMix rng{23};
    int checked = 0;
    while (checked < 200) {
      const auto g = football(rng.uniform(0.3, 2.8), rng.uniform(0.3, 2.8), rng.uniform(0.3, 2.8));
      TriangulatedMetric m = g;
      for (std::size_t k = 0; k < 6; ++k) m[k] += rng.uniform(-0.05, 0.05);
      if (!validate(m).empty()) continue;
      ++checked;
      const auto got = cone_angles(m);
      const auto ref = measure(m);
      CHECK(std::abs(got.theta_A - ref.A) < 1e-8);
      CHECK(std::abs(got.theta_B - ref.B) < 1e-8);
      CHECK(std::abs(got.theta_D - ref.D) < 1e-8);
      CHECK(std::abs(got.theta_C - ref.C) < 1e-8);
    }
  }

  TEST_CASE("perturbing l3 moves theta_C") {
    auto g = football(kPi / 2, kPi / 2, kPi / 3);
    g[2] += 0.01;
    CHECK(std::abs(cone_angles(g).theta_C - 4 * kPi) > 1e-4);
  }

  TEST_CASE("alternative slit pairing gives the same cone angles") {
    oracle::SplitMix rng{24};
    for (int i = 0; i < 100; ++i) {
      TriangulatedMetric m = football(rng.uniform(0.3, 2.8), rng.uniform(0.3, 2.8), rng.uniform(0.3, 2.8));
      for (std::size_t k = 0; k < 6; ++k) m[k] += rng.uniform(-0.03, 0.03);
      if (!validate(m).empty()) continue;
      const auto a = cone_angles(m, SlitPairing::canonical);
      const auto b = cone_angles(m, SlitPairing::alternative);
      CHECK(std::abs(a.theta_C - b.theta_C) < 1e-12);
      CHECK(std::abs(a.theta_D - b.theta_D) < 1e-12);
    }
  }

  TEST_CASE("swap_footballs exchanges A and B") {
    const auto g = football(1.0, 2.0, 1.2);
    const auto s = swap_footballs(g);
    CHECK(s.l1() == g.l2());
    CHECK(s.l5() == g.l6());
    CHECK(swap_footballs(s) == g);
    const auto a = cone_angles(g);
    const auto b = cone_angles(s);
    CHECK(std::abs(a.theta_A - b.theta_B) < 1e-12);
    CHECK(std::abs(a.theta_B - b.theta_A) < 1e-12);
    CHECK(std::abs(a.theta_C - b.theta_C) < 1e-12);
    CHECK(max_norm_distance(swap_footballs(g), football(2.0, 1.0, 1.2)) < 1e-15);
  }

  TEST_CASE("validate") {
    auto g = football(kPi / 2, kPi / 2, kPi / 3);
    g[4] = g.l3() + g.l4();
    const auto v = validate(g);
    REQUIRE_FALSE(v.empty());
    bool t2 = false;
    for (const auto& x : v) t2 = t2 || x.triangle == 1;
    CHECK(t2);
    try {
      require_valid(g);
      FAIL("expected ValidityError");
    } catch (const ValidityError& e) {
      CHECK(e.triangle() >= 0);
    }
    auto h = football(kPi / 2, kPi / 2, kPi / 3);
    h[0] = kPi;
    const auto w = validate(h);
    REQUIRE_FALSE(w.empty());
    CHECK(w.front().triangle == -1);
  }

  TEST_CASE("total area") {
    for (double t : {0.3, 1.0, kPi / 2, 2.5}) {
      CHECK(std::abs(total_area(football(kPi / 2, kPi / 2, t)) - 2 * kPi) < 1e-10);
      CHECK(std::abs(total_area(football(1.0, 2.0, t)) - 6.0) < 1e-10);
    }
    auto m = football(1.0, 1.5, 1.1);
    m[2] += 0.02;
    const double area = total_area(m);
    CHECK(area > 0.0);
    CHECK(area < 8 * kPi);
  }

  TEST_CASE("serialization round-trip") {
    const auto spec = ConeAngleSpec::make(kPi / 2, kPi / 2);
    const auto g = glued_football({spec, kPi / 3});
    const auto doc = deserialize(serialize(g, spec));
    CHECK(doc.metric == g);
    CHECK(doc.spec.alpha == spec.alpha);
    CHECK(doc.spec.beta == spec.beta);

    oracle::SplitMix rng{25};
    for (int i = 0; i < 100; ++i) {
      const auto s = ConeAngleSpec::make(rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0));
      const auto m = glued_football({s, rng.uniform(0.1, 3.0)});
      CHECK(deserialize(serialize(m, s)).metric == m);
      CHECK(serialize(m, s) == serialize(deserialize(serialize(m, s)).metric, s));
    }
  }

  TEST_CASE("deserialize errors") {
    const auto spec = ConeAngleSpec::make(kPi / 2, kPi / 2);
    const auto g = glued_football({spec, kPi / 3});
    const std::string text = serialize(g, spec);

    std::string missing = text;
    const auto at = missing.find("\"l6\"");
    REQUIRE(at != std::string::npos);
    missing.replace(at, 4, "\"lx\"");
    try {
      deserialize(missing);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("l6") != std::string::npos);
    }

    CHECK_THROWS_AS(deserialize("{\"lengths\": "), ParseError);
    CHECK_THROWS_AS(deserialize("[1, 2]"), ParseError);

    auto neg = g;
    neg[2] = -1.0;
    auto negdoc = nlohmann::json::parse(text);
    negdoc["lengths"]["l3"] = -1.0;
    CHECK_THROWS_AS(deserialize(negdoc.dump()), RangeError);
    CHECK_NOTHROW(parse_metric_document(negdoc.dump()));

    CHECK_THROWS_AS(serialize(neg, spec), ValidityError);
    auto doc = nlohmann::json::parse(text);
    doc["lengths"]["l5"] = 2.5;
    CHECK_THROWS_AS(deserialize(doc.dump()), ValidityError);
  }
}
