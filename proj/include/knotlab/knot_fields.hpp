#pragma once

/// Closed-form evaluation of the Hopf-knot electromagnetic field.
///
/// Everything is dimensionless: lengths in units of L0, time T = ct/L0, and
/// fields scaled as b = (pi L0^2 / sqrt(a)) B, e = (pi L0^2 / (sqrt(a) c)) E.
/// In these units the time-dependent solution has unit prefactor and the
/// Cauchy data at the origin are b = (0,0,-4), e = (4,0,0).

#include <complex>
#include <utility>

#include "knotlab/vec3.hpp"

namespace knotlab {

struct SpacetimePoint {
  Vec3 position;
  double t = 0.0;
};

struct FieldSample {
  Vec3 b;
  Vec3 e;
};

struct AuxQuantities {
  double a_aux = 0.0;
  double p_aux = 0.0;
  double q_aux = 0.0;
};

using ComplexScalar = std::complex<double>;

/// Selects the x-component of H2.
///
/// `standard` uses (1 + X^2 - Z^2 - (Y+T)^2)/2, which is the form that agrees
/// with the Cauchy data, the map pullback, and the vacuum Maxwell equations.
/// `plus_z2` uses (1 + X^2 + Z^2 - (Y+T)^2)/2. That field is not a Maxwell
/// solution (E.B != 0 off the Z=0 plane); it is kept for comparison with
/// ensemble results that were obtained from that form.
enum class FieldVariant { standard, plus_z2 };

/// Modulus below which a map denominator counts as a pole.
inline constexpr double kPoleEpsilon = 1e-12;

/// Default central-difference step.
inline constexpr double kDefaultFdStep = 1e-4;

AuxQuantities aux_quantities(const SpacetimePoint& p);

std::pair<Vec3, Vec3> h_vectors(const SpacetimePoint& p,
                                FieldVariant variant = FieldVariant::standard);

/// b = (Q H1 + P H2)/(A^2+T^2)^3, e = (Q H2 - P H1)/(A^2+T^2)^3.
FieldSample field_at(const SpacetimePoint& p, FieldVariant variant = FieldVariant::standard);

/// t = 0 data, evaluated from its own closed form.
FieldSample cauchy_fields(const Vec3& r);

struct Potentials {
  Vec3 a_pot;  ///< curl a_pot = b at t = 0
  Vec3 c_pot;  ///< curl c_pot = e at t = 0
};

Potentials potentials_t0(const Vec3& r);

struct MapPair {
  ComplexScalar phi;
  ComplexScalar theta;
};

/// phi0 = 2(X+iY)/(2Z+i(R^2-1)), theta0 = 2(Y+iZ)/(2X+i(R^2-1)).
/// Throws PoleError when either denominator modulus is below kPoleEpsilon.
MapPair hopf_maps_t0(const Vec3& r);

/// Time-dependent maps; reduce to hopf_maps_t0 at T = 0.
MapPair time_maps(const SpacetimePoint& p);

/// Denominators of phi and theta in time_maps (they share the imaginary part).
std::pair<ComplexScalar, ComplexScalar> map_denominators(const SpacetimePoint& p);

/// Field reconstructed from the scalar maps by pullback,
///   b = (1/2i) grad(phi) x grad(conj phi) / (1+|phi|^2)^2,
///   e = (1/2i) grad(conj theta) x grad(theta) / (1+|theta|^2)^2,
/// with gradients from central differences of time_maps.
///
/// Each map is differentiated in whichever chart (w or 1/w) has |w| <= 1 at
/// p; the pullback of the area form is invariant under that change, so the
/// result is accurate even where |phi| is large.
///
/// Throws PoleProximityError when p lies within fd_step of a zero of a map
/// denominator (linearized distance), NonFiniteError on NaN/inf.
FieldSample fields_from_maps(const SpacetimePoint& p, double fd_step = kDefaultFdStep);

}  // namespace knotlab
