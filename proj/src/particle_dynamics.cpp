#include "knotlab/particle_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "knotlab/errors.hpp"

namespace knotlab {

namespace {

using State6 = ode::State<6>;

State6 pack(const ParticleState& s) {
  return {s.position.x, s.position.y, s.position.z, s.velocity.x, s.velocity.y, s.velocity.z};
}

ParticleState unpack(const State6& y) { return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}}; }

ode::StepControl step_control(const PushConfig& c) {
  ode::StepControl ctl;
  ctl.rel_tol = c.rel_tol;
  ctl.abs_tol = c.abs_tol;
  ctl.max_step = c.max_step;
  ctl.initial_step = std::min(1e-3, c.max_step);
  return ctl;
}

Vec3 acceleration(const Vec3& position, const Vec3& velocity, double t, double g,
                  FieldVariant variant) {
  const FieldSample f = field_at({position, t}, variant);
  const double gamma_inv = std::sqrt(1.0 - norm2(velocity));
  return -g * gamma_inv * (f.e + cross(velocity, f.b) - dot(velocity, f.e) * velocity);
}

}  // namespace

void PushConfig::validate() const {
  if (!std::isfinite(g) || g < 0.0) throw InvalidArgumentError("g must be finite and >= 0");
  if (!(t_end > t_start)) throw InvalidArgumentError("t_end must exceed t_start");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgumentError("tolerances must be > 0");
  if (!(max_step > 0.0)) throw InvalidArgumentError("max_step must be > 0");
}

StateDerivative lorentz_rhs(const ParticleState& state, double t, double g, FieldVariant variant) {
  if (!(norm2(state.velocity) < 1.0)) {
    throw SuperluminalError("particle speed " + std::to_string(norm(state.velocity)) +
                            " >= 1 at T=" + std::to_string(t));
  }
  return {state.velocity, acceleration(state.position, state.velocity, t, g, variant)};
}

Trajectory integrate_particle(const ParticleState& state0, const PushConfig& config) {
  config.validate();
  if (!(norm2(state0.velocity) < 1.0)) {
    throw SuperluminalError("initial speed " + std::to_string(norm(state0.velocity)) + " >= 1");
  }

  auto rhs = [&](double t, const State6& y) -> std::optional<State6> {
    const Vec3 v{y[3], y[4], y[5]};
    if (!(norm2(v) < 1.0)) return std::nullopt;
    const Vec3 a = acceleration({y[0], y[1], y[2]}, v, t, config.g, config.variant);
    return State6{v.x, v.y, v.z, a.x, a.y, a.z};
  };

  Trajectory traj;
  traj.samples.push_back({config.t_start, state0});
  const double stride = config.output_stride;
  std::size_t next_index = 1;

  auto observer = [&](const ode::DenseSegment<6>& seg) {
    const ParticleState end = unpack(seg(seg.t1()));
    if (!(norm2(end.velocity) < 1.0)) {
      throw SuperluminalError("accepted state with |V| >= 1 at T=" + std::to_string(seg.t1()));
    }
    if (stride > 0.0) {
      for (;;) {
        const double ts = config.t_start + static_cast<double>(next_index) * stride;
        if (ts >= seg.t1() || ts >= config.t_end) break;
        traj.samples.push_back({ts, unpack(seg(ts))});
        ++next_index;
      }
    } else if (seg.t1() < config.t_end) {
      traj.samples.push_back({seg.t1(), end});
    }
    return true;
  };

  const auto res = ode::integrate<6>(rhs, config.t_start, pack(state0), config.t_end,
                                     step_control(config), observer);
  const ParticleState final_state = unpack(res.y);
  if (!(norm2(final_state.velocity) < 1.0)) {
    throw SuperluminalError("final state with |V| >= 1");
  }
  traj.samples.push_back({config.t_end, final_state});
  traj.steps_taken = res.steps_taken;
  traj.steps_rejected = res.steps_rejected;
  return traj;
}

ParticleState integrate_particle_momentum(const ParticleState& state0, const PushConfig& config) {
  config.validate();
  const double v2 = norm2(state0.velocity);
  if (!(v2 < 1.0)) throw SuperluminalError("initial speed >= 1");
  const Vec3 u0 = state0.velocity / std::sqrt(1.0 - v2);

  auto rhs = [&](double t, const State6& y) -> std::optional<State6> {
    const Vec3 u{y[3], y[4], y[5]};
    const Vec3 v = u / std::sqrt(1.0 + norm2(u));
    const FieldSample f = field_at({{y[0], y[1], y[2]}, t}, config.variant);
    const Vec3 du = -config.g * (f.e + cross(v, f.b));
    return State6{v.x, v.y, v.z, du.x, du.y, du.z};
  };
  const auto res =
      ode::integrate<6>(rhs, config.t_start, pack({state0.position, u0}), config.t_end,
                        step_control(config));
  const Vec3 u{res.y[3], res.y[4], res.y[5]};
  return {{res.y[0], res.y[1], res.y[2]}, u / std::sqrt(1.0 + norm2(u))};
}

std::vector<ParticleState> paper_ensemble() {
  std::vector<ParticleState> out;
  out.reserve(60);
  for (int axis = 0; axis < 3; ++axis) {
    for (int i = 1; i <= 10; ++i) {
      for (const double sign : {1.0, -1.0}) {
        out.push_back({(sign * i / 10.0) * unit_axis(axis), {}});
      }
    }
  }
  return out;
}

EnsembleResult run_ensemble(const std::vector<ParticleState>& states, const PushConfig& config,
                            ExecPolicy exec) {
  config.validate();
  EnsembleResult res;
  res.particles.resize(states.size());
  parallel_for(states.size(), exec, [&](std::size_t i) {
    try {
      res.particles[i].trajectory = integrate_particle(states[i], config);
    } catch (const Error& e) {
      res.particles[i].error = e.what();
    }
  });

  res.final_speeds.assign(states.size(), std::numeric_limits<double>::quiet_NaN());
  res.v_min = std::numeric_limits<double>::infinity();
  res.v_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& p = res.particles[i];
    if (!p.trajectory) {
      ++res.failures;
      continue;
    }
    const double v = p.trajectory->final_speed();
    res.final_speeds[i] = v;
    res.v_min = std::min(res.v_min, v);
    res.v_max = std::max(res.v_max, v);
    if (p.trajectory->final_state().velocity.y < 0.0) ++res.reversed_count;
  }
  if (res.failures == states.size()) {
    res.v_min = res.v_max = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

double prefactor_constant() {
  using namespace constants;
  return elementary_charge / (std::numbers::pi * electron_mass * speed_of_light) *
         std::sqrt(vacuum_permeability / 2.0);
}

double prefactor_g(double energy_joules, double l0_meters) {
  if (!(energy_joules > 0.0) || !(l0_meters > 0.0) || !std::isfinite(energy_joules) ||
      !std::isfinite(l0_meters)) {
    throw InvalidArgumentError("prefactor_g needs positive energy and length");
  }
  return prefactor_constant() * std::sqrt(energy_joules / l0_meters);
}

}  // namespace knotlab
