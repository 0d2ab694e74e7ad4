#pragma once

/// Energy, momentum and helicity diagnostics of the knot field.
///
/// Energy density is in units a/(mu0 L0^4), total energy in a/(mu0 L0),
/// momentum in a c/(mu0 L0), helicities in a/mu0.

#include <array>
#include <string>
#include <vector>

#include "knotlab/knot_fields.hpp"
#include "knotlab/quadrature.hpp"

namespace knotlab {

/// U = (1 + X^2 + (Y+T)^2 + Z^2)^2 / (4 pi^2 (A^2+T^2)^3).
double energy_density(const SpacetimePoint& p);

/// (|e|^2 + |b|^2) / (2 pi^2) from the closed-form field of the given variant.
double energy_density_from_fields(const SpacetimePoint& p,
                                  FieldVariant variant = FieldVariant::standard);

IntegralEstimate total_energy(double t, const GridSpec& spec = {}, ExecPolicy exec = {});

/// (1/pi^2) * integral of e x b.
VecIntegralEstimate poynting_total(double t, const GridSpec& spec = {}, ExecPolicy exec = {});

struct Helicities {
  IntegralEstimate magnetic;  ///< (1/2pi^2) * integral of a_pot . b
  IntegralEstimate electric;  ///< (1/2pi^2) * integral of c_pot . e
};

/// Only defined at T = 0, where the potentials are known in closed form.
Helicities helicities_t0(const GridSpec& spec = {}, ExecPolicy exec = {});

/// Golden-section maximisation of U along X = Z = 0, Y in [-1, T+2].
/// Requires 0 <= T <= 2.
Vec3 energy_max_position(double t);

/// The approximate trajectory of the maximum, Y = T(1+6T^2)/(2+6T^2).
double approximate_max_y(double t);

/// sqrt( integral |r - centre|^2 U / integral U ), integrated on the
/// origin-centred grid.
double mean_quadratic_radius_about(const Vec3& centre, double t, const GridSpec& spec = {},
                                   ExecPolicy exec = {});

/// mean_quadratic_radius_about(energy_max_position(t), ...).
double mean_quadratic_radius(double t, const GridSpec& spec = {}, ExecPolicy exec = {});

/// Fraction of the total energy inside the ball |r - centre| <= radius.
double energy_fraction_within(double radius, const Vec3& centre, double t,
                              const GridSpec& spec = {}, ExecPolicy exec = {});

/// Energy-weighted second-moment tensor about centre (normalised by total
/// energy) and its eigenvalues in ascending order.
struct SecondMoments {
  std::array<std::array<double, 3>, 3> tensor{};
  std::array<double, 3> eigenvalues{};
};

SecondMoments second_moments(const Vec3& centre, double t, const GridSpec& spec = {},
                             ExecPolicy exec = {});

struct EnergyReport {
  double time = 0.0;
  double total_energy = 0.0;
  double total_energy_error = 0.0;
  Vec3 max_position;
  double max_density = 0.0;
  double mean_quadratic_radius = 0.0;
  double fraction_within_unit_ball = 0.0;
  Vec3 momentum;
  std::array<double, 3> moment_eigenvalues{};
};

EnergyReport energy_report(double t, const GridSpec& spec = {}, ExecPolicy exec = {});

struct GridRow {
  Vec3 position;
  double energy = 0.0;
  FieldSample fields;
};

/// Regular lattice from lo to hi inclusive with resolution[i] >= 2 points per
/// axis, ordered X-slowest, Z-fastest.
std::vector<GridRow> grid_export(double t, const Vec3& lo, const Vec3& hi,
                                 const std::array<int, 3>& resolution,
                                 FieldVariant variant = FieldVariant::standard);

}  // namespace knotlab
