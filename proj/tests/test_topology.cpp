#include <cmath>
#include <numbers>

#include "doctest.h"
#include "knotlab/errors.hpp"
#include "knotlab/topology.hpp"

using namespace knotlab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FieldLine circle(const Vec3& centre, const Vec3& u, const Vec3& v, double radius, int n) {
  FieldLine l;
  l.closed = true;
  for (int k = 0; k <= n; ++k) {
    const double s = kTwoPi * (k % n) / n;
    l.points.push_back(centre + radius * (std::cos(s) * u + std::sin(s) * v));
  }
  l.length = kTwoPi * radius;
  return l;
}

TraceControl with_points(int n) {
  TraceControl c;
  c.points = n;
  return c;
}

}  // namespace

TEST_CASE("Gauss linking number of synthetic circles") {
  const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
  const FieldLine a = circle({0, 0, 0}, ex, ey, 1.0, 400);
  const FieldLine b = circle({1, 0, 0}, ex, ez, 1.0, 400);  // Hopf link
  const FieldLine c = circle({5, 0, 0}, ex, ez, 1.0, 400);  // far away
  const LinkingResult ab = gauss_linking_number(a, b);
  CHECK(std::abs(ab.rounded) == 1);
  CHECK(ab.deviation < 1e-3);
  CHECK(gauss_linking_number(a, c).rounded == 0);
  CHECK(std::abs(gauss_linking_number(a, c).raw) < 1e-3);
  // Symmetric in the pair, odd under reversal of either curve.
  CHECK(gauss_linking_number(b, a).raw == doctest::Approx(ab.raw).epsilon(1e-12));
  CHECK(gauss_linking_number(reversed(a), b).raw == doctest::Approx(-ab.raw).epsilon(1e-12));
}

TEST_CASE("linking rejects open or intersecting curves") {
  const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
  FieldLine open = circle({}, ex, ey, 1.0, 100);
  open.closed = false;
  const FieldLine b = circle({1, 0, 0}, ex, ez, 1.0, 100);
  CHECK_THROWS_AS(gauss_linking_number(open, b), OpenCurveError);
  const FieldLine touching = circle({2, 0, 0}, ex, ey, 1.0, 100);
  CHECK_THROWS_AS(gauss_linking_number(circle({}, ex, ey, 1.0, 100), touching), NearIntersectionError);
}

TEST_CASE("magnetic lines at T=0 are closed round circles tangent to b") {
  const FieldLine l = trace_field_line({0.3, 0.0, 0.0}, 0.0, FieldKind::magnetic, with_points(1000));
  REQUIRE(l.closed);
  CHECK(l.closure_gap < 1e-3);
  CHECK(l.points.front().x == l.points.back().x);

  Vec3 c{};
  for (std::size_t i = 0; i + 1 < l.points.size(); ++i) c = c + l.points[i];
  c = c / static_cast<double>(l.points.size() - 1);
  const double r0 = norm(l.points[0] - c);
  const Vec3 n = cross(l.points[1] - l.points[0], l.points[250] - l.points[0]);
  for (std::size_t i = 0; i < l.points.size(); i += 37) {
    CHECK(norm(l.points[i] - c) == doctest::Approx(r0).epsilon(1e-6));
    CHECK(std::abs(dot(l.points[i] - c, n)) / norm(n) < 1e-6);
  }
  CHECK(l.length == doctest::Approx(kTwoPi * r0).epsilon(1e-6));

  for (std::size_t i = 1; i + 1 < l.points.size(); i += 97) {
    const Vec3 tangent = l.points[i + 1] - l.points[i - 1];
    const Vec3 b = field_at({l.points[i], 0.0}).b;
    CHECK(dot(tangent, b) / (norm(tangent) * norm(b)) > 1.0 - 1e-5);
  }
}

TEST_CASE("the electric line through (0, 0.5, 0) has length 5 pi / 2") {
  const FieldLine l = trace_field_line({0.0, 0.5, 0.0}, 0.0, FieldKind::electric, with_points(500));
  REQUIRE(l.closed);
  CHECK(l.length == doctest::Approx(2.5 * std::numbers::pi).epsilon(1e-7));
}

TEST_CASE("knot fibers link once and the value is stable under refinement") {
  const auto pair = [](int n) {
    const FieldLine a = trace_field_line({0.3, 0, 0}, 0.0, FieldKind::magnetic, with_points(n));
    const FieldLine b = trace_field_line({0.6, 0, 0}, 0.0, FieldKind::magnetic, with_points(n));
    return gauss_linking_number(a, b);
  };
  const LinkingResult coarse = pair(1000);
  const LinkingResult fine = pair(2000);
  CHECK(fine.rounded == 1);
  CHECK(fine.deviation < 0.05);
  CHECK(std::abs(fine.raw - coarse.raw) < 0.01);

  const FieldLine m = trace_field_line({0.3, 0, 0}, 0.0, FieldKind::magnetic, with_points(1000));
  const FieldLine e = trace_field_line({0.0, 0.5, 0}, 0.0, FieldKind::electric, with_points(1000));
  CHECK(gauss_linking_number(m, e).rounded == 1);
}

TEST_CASE("tracing failures") {
  // The electric line through (0.5,0,0) runs along the x-axis to infinity.
  TraceControl c = with_points(200);
  c.max_arclength = 20.0;
  const FieldLine open = trace_field_line({0.5, 0.0, 0.0}, 0.0, FieldKind::electric, c);
  CHECK_FALSE(open.closed);
  CHECK(to_string(FieldKind::electric) == "electric");
}
