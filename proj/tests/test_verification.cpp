#include <cmath>
#include <set>

#include "doctest.h"
#include "knotlab/errors.hpp"
#include "knotlab/verification.hpp"

using namespace knotlab;

TEST_CASE("SplitMix64 reference outputs") {
  // First outputs for seed 0 from the reference implementation.
  Rng rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("uniform deviates and events stay in range") {
  Rng rng(42);
  std::set<double> seen;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    seen.insert(u);
  }
  CHECK(seen.size() == 10000);
  for (int i = 0; i < 1000; ++i) {
    const SpacetimePoint p = random_event(rng);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(p.position[k]) <= 3.0);
    CHECK(p.t >= 0.0);
    CHECK(p.t <= 3.0);
  }
}

TEST_CASE("null field check") {
  const CheckReport r = check_null_field(10000, 42);
  CHECK(r.passed);
  CHECK(r.samples == 10000);
  CHECK(r.max_residual < 1e-12);
  // The printed-H2 variant is not null.
  CHECK_FALSE(check_null_field(100, 42, FieldVariant::plus_z2).passed);
  CHECK_THROWS_AS(check_null_field(0, 1), InvalidArgumentError);
}

TEST_CASE("Maxwell residuals are second order in the step") {
  const CheckReport a = check_maxwell(100, 1e-4, 42);
  const CheckReport b = check_maxwell(100, 0.5e-4, 42);
  CHECK(a.passed);
  CHECK(a.max_residual / b.max_residual == doctest::Approx(4.0).epsilon(0.25));
  CHECK_FALSE(check_maxwell(20, 1e-4, 42, FieldVariant::plus_z2).passed);
  CHECK_THROWS_AS(maxwell_residuals({}, 0.0), InvalidArgumentError);
}

TEST_CASE("a non-solution fails the Maxwell check") {
  // Sanity of the residual itself: the printed variant violates Faraday or Ampere
  // at a generic point.
  const MaxwellResiduals r = maxwell_residuals({{0.4, 0.2, 0.7}, 0.5}, 1e-4, FieldVariant::plus_z2);
  CHECK(r.max() > 1e-3);
}

TEST_CASE("representation cross-checks") {
  const auto reports = check_representations(100, 7);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) CHECK_MESSAGE(r.passed, r.check_name << " " << r.max_residual);
}

TEST_CASE("conservation sweep") {
  const auto reports = conservation_sweep({0.0, 0.5, 1.0, 1.5}, {});
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) CHECK_MESSAGE(r.passed, r.check_name << " " << r.max_residual);
  CHECK_THROWS_AS(conservation_sweep({}, {}), InvalidArgumentError);
}

TEST_CASE("verify_all is deterministic and thread-independent") {
  const auto a = verify_all(42, {1});
  const auto b = verify_all(42, {3});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].check_name == b[i].check_name);
    CHECK(a[i].max_residual == b[i].max_residual);
    CHECK(a[i].passed);
  }
}

TEST_CASE("make_report treats NaN as failure") {
  CHECK_FALSE(make_report("x", 1, std::nan(""), 1.0).passed);
  CHECK(make_report("x", 1, 1.0, 1.0).passed);
}
