#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sphcone/admissibility.hpp"
#include "sphcone/errors.hpp"
#include "sphcone/metric.hpp"

using namespace sphcone;
using namespace sphcone::admissibility;

TEST_SUITE("admissibility") {
  TEST_CASE("chi examples") {
    CHECK(chi({{0.25, 0.25, 0.5, 2.0}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(chi({}) == 2.0);
    CHECK(chi({{1.0, 1.0}}, 2) == 2.0);
    CHECK(chi({{0.5}}, 0) == -0.5);
  }

  TEST_CASE("family vector") {
    const auto v = family_vector(ConeAngleSpec::make(kPi / 2, kPi / 2));
    REQUIRE(v.beta.size() == 4);
    CHECK(v.beta[0] == doctest::Approx(0.25));
    CHECK(v.beta[1] == doctest::Approx(0.25));
    CHECK(v.beta[2] == doctest::Approx(0.5));
    CHECK(v.beta[3] == doctest::Approx(2.0));
  }

  TEST_CASE("mp_distance examples") {
    CHECK(mp_distance({{1.0, 1.0}}) == 1.0);
    CHECK(mp_distance({{0.25, 0.25, 0.5, 2.0}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::brute_force_odd_sum({-0.75, -0.75, -0.5, 1.0}, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mp_distance({}) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(mp_distance({{1.0, -0.5}}), RangeError);
  }

  TEST_CASE("nearest point has odd sum and attains the distance") {
    oracle::SplitMix rng{31};
    for (int i = 0; i < 300; ++i) {
      AngleVector v;
      const int k = 1 + static_cast<int>(rng.next() % 5);
      for (int j = 0; j < k; ++j) v.beta.push_back(rng.uniform(0.01, 3.0));
      const auto p = nearest_odd_point(v);
      REQUIRE(p.point.size() == v.beta.size());
      long long sum = 0;
      double d = 0.0;
      for (std::size_t j = 0; j < v.beta.size(); ++j) {
        sum += p.point[j];
        d += std::abs(v.beta[j] - 1.0 - static_cast<double>(p.point[j]));
      }
      CHECK(sum % 2 != 0);
      CHECK(std::abs(d - p.distance) < 1e-12);
    }
  }

  TEST_CASE("mp_distance matches brute-force enumeration") {
    oracle::SplitMix rng{32};
    for (int i = 0; i < 300; ++i) {
      AngleVector v;
      std::vector<double> x;
      const int k = 1 + static_cast<int>(rng.next() % 4);
      for (int j = 0; j < k; ++j) {
        v.beta.push_back(rng.uniform(0.01, 3.0));
        x.push_back(v.beta.back() - 1.0);
      }
      CHECK(std::abs(mp_distance(v) - oracle::brute_force_odd_sum(x, 4)) < 1e-12);
    }
  }

  TEST_CASE("family sits on the boundary") {
    oracle::SplitMix rng{33};
    for (int i = 0; i < 200; ++i) {
      const auto spec = ConeAngleSpec::make(rng.uniform(0.05, kPi - 0.05), rng.uniform(0.05, kPi - 0.05));
      const auto v = family_vector(spec);
      CHECK(std::abs(mp_distance(v) - 1.0) < 1e-12);
      CHECK(std::abs(chi(v) - (spec.alpha + spec.beta) / kPi) < 1e-12);
      const auto g = glued_football({spec, rng.uniform(0.2, kPi - 0.2)});
      CHECK(std::abs(total_area(g) - kTwoPi * chi(v)) < 1e-10);
    }
  }

  TEST_CASE("all-odd lattice gives (alpha + beta) / pi on the family") {
    oracle::SplitMix rng{34};
    for (int i = 0; i < 100; ++i) {
      const auto spec = ConeAngleSpec::make(rng.uniform(0.05, kPi - 0.05), rng.uniform(0.05, kPi - 0.05));
      const auto v = family_vector(spec);
      const auto p = nearest_odd_point(v, OddLattice::all_odd);
      for (long long m : p.point) CHECK(std::abs(m % 2) == 1);
      CHECK(std::abs(p.distance - (spec.alpha + spec.beta) / kPi) < 1e-12);
    }
  }
}
