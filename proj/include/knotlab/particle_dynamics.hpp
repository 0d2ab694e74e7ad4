#pragma once

/// Relativistic test electrons in the knot field.
///
/// In dimensionless form the equation of motion is
///   dR/dT = V,
///   dV/dT = -g sqrt(1 - V^2) [ e + V x b - V (V . e) ],
/// with (e, b) = field_at(R, T) and g = e sqrt(a) / (pi m c L0).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knotlab/knot_fields.hpp"
#include "knotlab/ode.hpp"
#include "knotlab/parallel.hpp"

namespace knotlab {

struct ParticleState {
  Vec3 position;  ///< units of L0
  Vec3 velocity;  ///< units of c, |velocity| < 1
};

struct PushConfig {
  double g = 1.0;
  double t_start = 0.0;
  double t_end = 1.5;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.05;
  /// Sampling interval for the stored trajectory; <= 0 stores every step.
  double output_stride = 0.01;
  FieldVariant variant = FieldVariant::standard;

  /// Throws InvalidArgumentError on t_end <= t_start, nonpositive tolerances
  /// or step, or negative/non-finite g.
  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  ParticleState state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::size_t steps_taken = 0;
  std::size_t steps_rejected = 0;

  const ParticleState& final_state() const { return samples.back().state; }
  double final_speed() const { return norm(final_state().velocity); }
};

struct StateDerivative {
  Vec3 d_position;
  Vec3 d_velocity;
};

/// Throws SuperluminalError if |V| >= 1.
StateDerivative lorentz_rhs(const ParticleState& state, double t, double g,
                            FieldVariant variant = FieldVariant::standard);

/// Adaptive Dormand-Prince 5(4) integration of the velocity form from
/// config.t_start to config.t_end. The trajectory is sampled at the start, at
/// every multiple of output_stride via the continuous extension, and exactly
/// at t_end.
///
/// Throws SuperluminalError for an invalid initial state or an accepted
/// state with |V| >= 1, StepSizeUnderflowError if the step collapses.
Trajectory integrate_particle(const ParticleState& state0, const PushConfig& config);

/// Same physics integrated in the momentum form du/dT = -g (e + V x b),
/// u = V / sqrt(1 - V^2). Used as an independent cross-check; only the final
/// state is returned.
ParticleState integrate_particle_momentum(const ParticleState& state0, const PushConfig& config);

/// 60 electrons at rest at +-0.1, ..., +-1.0 on each coordinate axis.
/// Order: axis x, y, z; for each axis magnitudes 0.1..1.0, positive first.
std::vector<ParticleState> paper_ensemble();

struct ParticleOutcome {
  std::optional<Trajectory> trajectory;
  std::string error;  ///< empty on success
};

struct EnsembleResult {
  std::vector<ParticleOutcome> particles;
  std::vector<double> final_speeds;  ///< per particle; NaN for failed ones
  double v_min = 0.0;
  double v_max = 0.0;
  std::size_t failures = 0;
  /// Particles whose final Vy is negative (moving against the knot).
  std::size_t reversed_count = 0;
};

/// Integrates every particle independently. A failing particle is recorded
/// with its error message and excluded from v_min / v_max.
EnsembleResult run_ensemble(const std::vector<ParticleState>& states, const PushConfig& config,
                            ExecPolicy exec = {});

/// CODATA 2018 constants (SI).
namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;
inline constexpr double electron_mass = 9.1093837015e-31;
inline constexpr double speed_of_light = 299792458.0;
inline constexpr double vacuum_permeability = 1.25663706212e-6;
}  // namespace constants

/// g = (e / (pi m c)) sqrt(mu0 E / (2 L0)) for knot energy E [J] and size L0 [m].
/// Throws InvalidArgumentError unless both are positive.
double prefactor_g(double energy_joules, double l0_meters);

/// The constant k in g = k sqrt(E / L0).
double prefactor_constant();

}  // namespace knotlab
