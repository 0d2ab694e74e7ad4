#include <cmath>
#include <numbers>
#include <optional>

#include "doctest.h"
#include "knotlab/errors.hpp"
#include "knotlab/particle_dynamics.hpp"

using namespace knotlab;

namespace {

// Fixed-step RK4 on the momentum form du/dT = -g (e + V x b), u = gamma V.
// Shares nothing with the library integrators except field_at.
ParticleState rk4_momentum(ParticleState s, double g, double t0, double t1, double h) {
  using Y = std::array<double, 6>;
  auto f = [g](double t, const Y& y) {
    const Vec3 u{y[3], y[4], y[5]};
    const Vec3 v = u / std::sqrt(1.0 + norm2(u));
    const FieldSample fs = field_at({{y[0], y[1], y[2]}, t});
    const Vec3 du = -g * (fs.e + cross(v, fs.b));
    return Y{v.x, v.y, v.z, du.x, du.y, du.z};
  };
  const double gamma = 1.0 / std::sqrt(1.0 - norm2(s.velocity));
  Y y{s.position.x, s.position.y, s.position.z, gamma * s.velocity.x, gamma * s.velocity.y,
      gamma * s.velocity.z};
  const int n = static_cast<int>(std::lround((t1 - t0) / h));
  auto axpy = [](const Y& a, double c, const Y& b) {
    Y r;
    for (int i = 0; i < 6; ++i) r[i] = a[i] + c * b[i];
    return r;
  };
  for (int k = 0; k < n; ++k) {
    const double t = t0 + k * h;
    const Y k1 = f(t, y);
    const Y k2 = f(t + h / 2, axpy(y, h / 2, k1));
    const Y k3 = f(t + h / 2, axpy(y, h / 2, k2));
    const Y k4 = f(t + h, axpy(y, h, k3));
    for (int i = 0; i < 6; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  const Vec3 u{y[3], y[4], y[5]};
  return {{y[0], y[1], y[2]}, u / std::sqrt(1.0 + norm2(u))};
}

PushConfig config_for(double g, FieldVariant variant = FieldVariant::standard) {
  PushConfig c;
  c.g = g;
  c.variant = variant;
  return c;
}

}  // namespace

TEST_CASE("rhs: at rest the acceleration is -g e") {
  const ParticleState s{{0.2, -0.1, 0.3}, {}};
  const StateDerivative d = lorentz_rhs(s, 0.4, 2.0);
  const FieldSample f = field_at({s.position, 0.4});
  CHECK(norm(d.d_velocity + 2.0 * f.e) < 1e-14);
  CHECK(norm(d.d_position) == 0.0);
  CHECK_THROWS_AS(lorentz_rhs({{}, {1.0, 0.0, 0.0}}, 0.0, 1.0), SuperluminalError);
}

TEST_CASE("rhs equals the time derivative of the momentum form") {
  const ParticleState s{{0.3, 0.2, -0.5}, {0.4, -0.3, 0.5}};
  const double g = 3.0;
  const StateDerivative d = lorentz_rhs(s, 0.7, g);
  const FieldSample f = field_at({s.position, 0.7});
  // d(gamma V)/dT = gamma a + gamma^3 (V.a) V.
  const double gamma = 1.0 / std::sqrt(1.0 - norm2(s.velocity));
  const Vec3 a = d.d_velocity;
  const Vec3 du = gamma * a + gamma * gamma * gamma * dot(s.velocity, a) * s.velocity;
  CHECK(norm(du + g * (f.e + cross(s.velocity, f.b))) < 1e-13);
}

TEST_CASE("electron at rest at the origin against a fixed-step RK4 oracle") {
  const ParticleState s0{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  const Trajectory traj = integrate_particle(s0, config_for(1.0));
  const ParticleState oracle = rk4_momentum(s0, 1.0, 0.0, 1.5, 1e-4);
  CHECK(traj.samples.back().t == 1.5);
  CHECK(norm(traj.final_state().position - oracle.position) < 1e-6);
  CHECK(norm(traj.final_state().velocity - oracle.velocity) < 1e-6);
}

TEST_CASE("off-axis electron at g=10 against the oracle") {
  const ParticleState s0{{0.0, -0.4, 0.0}, {}};
  const Trajectory traj = integrate_particle(s0, config_for(10.0));
  const ParticleState oracle = rk4_momentum(s0, 10.0, 0.0, 1.5, 1e-4);
  CHECK(norm(traj.final_state().velocity - oracle.velocity) < 1e-6);
}

TEST_CASE("velocity and momentum forms agree") {
  for (double g : {1.0, 10.0, 100.0}) {
    const ParticleState s0{{0.5, 0.0, 0.0}, {}};
    const PushConfig c = config_for(g);
    const ParticleState a = integrate_particle(s0, c).final_state();
    const ParticleState b = integrate_particle_momentum(s0, c);
    CHECK_MESSAGE(norm(a.velocity - b.velocity) < 1e-6, "g=" << g);
    CHECK_MESSAGE(norm(a.position - b.position) < 1e-6, "g=" << g);
  }
}

TEST_CASE("sampling grid") {
  PushConfig c = config_for(1.0);
  c.t_end = 0.255;
  c.output_stride = 0.05;
  const Trajectory traj = integrate_particle({{0.1, 0, 0}, {}}, c);
  REQUIRE(traj.samples.size() == 7);
  CHECK(traj.samples[0].t == 0.0);
  CHECK(traj.samples[3].t == doctest::Approx(0.15));
  CHECK(traj.samples.back().t == 0.255);
  for (const auto& s : traj.samples) CHECK(norm(s.state.velocity) < 1.0);
}

TEST_CASE("time reversal recovers the initial state") {
  const ParticleState s0{{0.0, 0.3, -0.2}, {0.1, 0.0, 0.2}};
  PushConfig c = config_for(5.0);
  c.t_end = 1.0;
  const ParticleState s1 = integrate_particle(s0, c).final_state();
  // Integrate the same equations from T=1 back to T=0.
  using Y = ode::State<6>;
  auto rhs = [&](double t, const Y& y) -> std::optional<Y> {
    const ParticleState s{{y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
    if (!(norm2(s.velocity) < 1.0)) return std::nullopt;
    const StateDerivative d = lorentz_rhs(s, t, c.g);
    return Y{d.d_position.x, d.d_position.y, d.d_position.z,
             d.d_velocity.x, d.d_velocity.y, d.d_velocity.z};
  };
  ode::StepControl ctl;
  ctl.rel_tol = 1e-11;
  ctl.abs_tol = 1e-13;
  const auto back = ode::integrate<6>(
      rhs, 1.0,
      Y{s1.position.x, s1.position.y, s1.position.z, s1.velocity.x, s1.velocity.y, s1.velocity.z},
      0.0, ctl);
  CHECK(norm(Vec3{back.y[0], back.y[1], back.y[2]} - s0.position) < 1e-7);
  CHECK(norm(Vec3{back.y[3], back.y[4], back.y[5]} - s0.velocity) < 1e-7);
}

TEST_CASE("60-electron ensemble layout") {
  const auto e = paper_ensemble();
  REQUIRE(e.size() == 60);
  CHECK(e[0].position.x == doctest::Approx(0.1));
  CHECK(e[1].position.x == doctest::Approx(-0.1));
  CHECK(e[19].position.x == doctest::Approx(-1.0));
  CHECK(e[20].position.y == doctest::Approx(0.1));
  CHECK(e[59].position.z == doctest::Approx(-1.0));
  for (const auto& s : e) CHECK(norm(s.velocity) == 0.0);
}

TEST_CASE("ensemble: frozen values, convergence and monotonicity in g") {
  const auto states = paper_ensemble();
  struct Frozen {
    double g, v_min, v_max;
  };
  double prev_min = 0.0;
  double prev_max = 0.0;
  for (const Frozen f : {Frozen{1, 0.516671, 0.845644}, Frozen{10, 0.974487, 0.993792},
                         Frozen{100, 0.997956, 0.999720}}) {
    PushConfig c = config_for(f.g);
    const EnsembleResult r = run_ensemble(states, c);
    CHECK(r.failures == 0);
    CHECK(r.v_min == doctest::Approx(f.v_min).epsilon(2e-6));
    CHECK(r.v_max == doctest::Approx(f.v_max).epsilon(2e-6));
    CHECK(r.v_min > prev_min);
    CHECK(r.v_max > prev_max);
    prev_min = r.v_min;
    prev_max = r.v_max;

    c.rel_tol /= 2;
    c.abs_tol /= 2;
    const EnsembleResult half = run_ensemble(states, c);
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      worst = std::max(worst, std::abs(half.final_speeds[i] - r.final_speeds[i]));
    }
    CHECK_MESSAGE(worst < 1e-6, "g=" << f.g);
  }
}

TEST_CASE("plus_z2 variant reproduces the target ensemble ranges") {
  const auto states = paper_ensemble();
  struct Target {
    double g, v_min, v_max;
  };
  for (const Target p : {Target{1, 0.5300, 0.8410}, Target{10, 0.9684, 0.9942}, Target{100, 0.9870, 0.9999}}) {
    const EnsembleResult r = run_ensemble(states, config_for(p.g, FieldVariant::plus_z2));
    CHECK(std::abs(r.v_min - p.v_min) < 5e-4);
    CHECK(std::abs(r.v_max - p.v_max) < 5e-4);
  }
}

TEST_CASE("threads do not change ensemble results") {
  const auto states = paper_ensemble();
  const PushConfig c = config_for(10.0);
  const EnsembleResult a = run_ensemble(states, c, {1});
  const EnsembleResult b = run_ensemble(states, c, {4});
  for (std::size_t i = 0; i < states.size(); ++i) CHECK(a.final_speeds[i] == b.final_speeds[i]);
}

TEST_CASE("prefactor") {
  namespace k = constants;
  const double oracle = k::elementary_charge / (std::numbers::pi * k::electron_mass * k::speed_of_light) *
                        std::sqrt(k::vacuum_permeability / 2.0);
  CHECK(prefactor_constant() == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(std::abs(prefactor_g(1.0, 1.0) - 0.148) < 0.002);
  CHECK(std::round(prefactor_constant() * 100.0) / 100.0 == 0.15);  // two-figure value
  CHECK(prefactor_g(45.6, 1.0) == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(prefactor_g(4.0, 2.0) == doctest::Approx(std::sqrt(2.0) * prefactor_g(1.0, 1.0)));
  CHECK_THROWS_AS(prefactor_g(0.0, 1.0), InvalidArgumentError);
  CHECK_THROWS_AS(prefactor_g(1.0, -1.0), InvalidArgumentError);
}

TEST_CASE("invalid configurations") {
  PushConfig c;
  c.t_end = c.t_start;
  CHECK_THROWS_AS(integrate_particle({}, c), InvalidArgumentError);
  c = PushConfig{};
  c.rel_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgumentError);
  CHECK_THROWS_AS(integrate_particle({{}, {0.8, 0.8, 0.0}}, PushConfig{}), SuperluminalError);
}
