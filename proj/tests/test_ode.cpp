#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "knotlab/errors.hpp"
#include "knotlab/ode.hpp"

using namespace knotlab;
using ode::State;

namespace {

// Harmonic oscillator, y = (cos t, -sin t).
std::optional<State<2>> oscillator(double, const State<2>& y) { return State<2>{y[1], -y[0]}; }

}  // namespace

TEST_CASE("harmonic oscillator to tolerance") {
  ode::StepControl ctl;
  ctl.rel_tol = 1e-10;
  ctl.abs_tol = 1e-12;
  const auto r = ode::integrate<2>(oscillator, 0.0, {1.0, 0.0}, 10.0, ctl);
  CHECK(r.t == 10.0);
  CHECK(std::abs(r.y[0] - std::cos(10.0)) < 1e-8);
  CHECK(std::abs(r.y[1] + std::sin(10.0)) < 1e-8);
  CHECK(r.steps_taken > 10);
}

TEST_CASE("global error shrinks with tolerance at roughly fifth order") {
  auto err = [](double tol) {
    ode::StepControl ctl;
    ctl.rel_tol = tol;
    ctl.abs_tol = tol;
    const auto r = ode::integrate<2>(oscillator, 0.0, {1.0, 0.0}, 5.0, ctl);
    return std::abs(r.y[0] - std::cos(5.0));
  };
  const double e1 = err(1e-6);
  const double e2 = err(1e-9);
  CHECK(e2 < e1 / 100.0);
}

TEST_CASE("dense output matches the solution inside each step") {
  ode::StepControl ctl;
  ctl.rel_tol = 1e-9;
  ctl.abs_tol = 1e-12;
  double worst = 0.0;
  ode::integrate<2>(oscillator, 0.0, {1.0, 0.0}, 6.0, ctl, [&](const ode::DenseSegment<2>& seg) {
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double t = seg.t0 + s * seg.h;
      worst = std::max(worst, std::abs(seg(t)[0] - std::cos(t)));
    }
    return true;
  });
  CHECK(worst < 1e-7);
}

TEST_CASE("backward integration") {
  const auto r = ode::integrate<2>(oscillator, 3.0, {std::cos(3.0), -std::sin(3.0)}, 0.0, {});
  CHECK(r.t == 0.0);
  CHECK(std::abs(r.y[0] - 1.0) < 1e-8);
}

TEST_CASE("observer can stop early") {
  const auto r = ode::integrate<2>(oscillator, 0.0, {1.0, 0.0}, 10.0, {},
                                   [](const ode::DenseSegment<2>& seg) { return seg.t1() < 1.0; });
  CHECK(r.stopped_early);
  CHECK(r.t >= 1.0);
  CHECK(r.t < 10.0);
}

TEST_CASE("domain violations shrink the step instead of failing") {
  // y' = -y on y > 0. A first step of 5 drives the explicit stages negative.
  const auto rhs = [](double, const State<1>& y) -> std::optional<State<1>> {
    if (y[0] <= 0.0) return std::nullopt;
    return State<1>{-y[0]};
  };
  ode::StepControl ctl;
  ctl.initial_step = 5.0;
  const auto r = ode::integrate<1>(rhs, 0.0, {1.0}, 5.0, ctl);
  CHECK(r.y[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-6));
  CHECK(r.steps_rejected >= 1);
}

TEST_CASE("failures are reported") {
  const auto never = [](double, const State<1>&) -> std::optional<State<1>> { return std::nullopt; };
  CHECK_THROWS_AS(ode::integrate<1>(never, 0.0, {0.0}, 1.0, {}), InvalidArgumentError);

  // Blow-up at t = 1: y' = y^2, y(0) = 1.
  const auto blowup = [](double, const State<1>& y) -> std::optional<State<1>> {
    return State<1>{y[0] * y[0]};
  };
  CHECK_THROWS_AS(ode::integrate<1>(blowup, 0.0, {1.0}, 2.0, {}), StepSizeUnderflowError);
}
