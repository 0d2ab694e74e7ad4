#include "knotlab/knot_fields.hpp"

#include <array>
#include <cmath>
#include <string>

#include "knotlab/errors.hpp"

namespace knotlab {

namespace {

struct RawMap {
  ComplexScalar num;
  ComplexScalar den;
};

struct RawMaps {
  RawMap phi;
  RawMap theta;
};

RawMaps raw_maps(const SpacetimePoint& p) {
  const auto [x, y, z] = p.position;
  const double t = p.t;
  const double a = 0.5 * (norm2(p.position) - t * t + 1.0);
  const double common_im = a * (a - 1.0) - t * y;
  const double u1 = a * x - t * z;
  const double u2 = a * y + t * (a - 1.0);
  const double u3 = a * z + t * x;
  return {{{u1, u2}, {u3, common_im}}, {{u2, u3}, {u1, common_im}}};
}

std::string describe(const SpacetimePoint& p) {
  return "(" + std::to_string(p.position.x) + ", " + std::to_string(p.position.y) + ", " +
         std::to_string(p.position.z) + ", T=" + std::to_string(p.t) + ")";
}

ComplexScalar checked_ratio(ComplexScalar num, ComplexScalar den, const char* name,
                            const SpacetimePoint& p) {
  if (std::abs(den) < kPoleEpsilon) {
    throw PoleError(std::string("map ") + name + " has a pole at " + describe(p));
  }
  return num / den;
}

// Distance from p to the zero set of a complex denominator, linearized.
double pole_distance_estimate(const SpacetimePoint& p, bool theta_map, double h) {
  auto den_at = [&](const Vec3& r) {
    const RawMaps m = raw_maps({r, p.t});
    return theta_map ? m.theta.den : m.phi.den;
  };
  const ComplexScalar d0 = den_at(p.position);
  double grad2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 dr = h * unit_axis(k);
    const ComplexScalar g = (den_at(p.position + dr) - den_at(p.position - dr)) / (2.0 * h);
    grad2 += std::norm(g);
  }
  if (grad2 == 0.0) return std::abs(d0) > 0.0 ? INFINITY : 0.0;
  return std::abs(d0) / std::sqrt(grad2);
}

struct ChartGradient {
  ComplexScalar value;
  std::array<ComplexScalar, 3> grad;
};

// Evaluate w = num/den or its inverse, whichever is bounded by 1 at p,
// together with its central-difference gradient.
ChartGradient chart_gradient(const SpacetimePoint& p, bool theta_map, double h) {
  auto pick = [theta_map](const RawMaps& m) { return theta_map ? m.theta : m.phi; };
  const RawMap centre = pick(raw_maps(p));
  const bool inverted = std::abs(centre.num) > std::abs(centre.den);
  auto chart = [&](const RawMap& m) { return inverted ? m.den / m.num : m.num / m.den; };

  ChartGradient out;
  out.value = chart(centre);
  for (int k = 0; k < 3; ++k) {
    const Vec3 dr = h * unit_axis(k);
    const ComplexScalar plus = chart(pick(raw_maps({p.position + dr, p.t})));
    const ComplexScalar minus = chart(pick(raw_maps({p.position - dr, p.t})));
    out.grad[static_cast<std::size_t>(k)] = (plus - minus) / (2.0 * h);
  }
  return out;
}

// (1/2i) u x v for complex 3-vectors whose cross product is purely imaginary.
Vec3 half_imag_cross(const std::array<ComplexScalar, 3>& u, const std::array<ComplexScalar, 3>& v) {
  const ComplexScalar cx = u[1] * v[2] - u[2] * v[1];
  const ComplexScalar cy = u[2] * v[0] - u[0] * v[2];
  const ComplexScalar cz = u[0] * v[1] - u[1] * v[0];
  return {0.5 * cx.imag(), 0.5 * cy.imag(), 0.5 * cz.imag()};
}

std::array<ComplexScalar, 3> conj3(const std::array<ComplexScalar, 3>& u) {
  return {std::conj(u[0]), std::conj(u[1]), std::conj(u[2])};
}

}  // namespace

AuxQuantities aux_quantities(const SpacetimePoint& p) {
  const double t = p.t;
  const double a = 0.5 * (norm2(p.position) - t * t + 1.0);
  return {a, t * (t * t - 3.0 * a * a), a * (a * a - 3.0 * t * t)};
}

std::pair<Vec3, Vec3> h_vectors(const SpacetimePoint& p, FieldVariant variant) {
  const double x = p.position.x;
  const double ys = p.position.y + p.t;
  const double z = p.position.z;
  const Vec3 h1{ys - x * z, -x - ys * z, 0.5 * (-1.0 - z * z + x * x + ys * ys)};
  const double z2_sign = variant == FieldVariant::standard ? -1.0 : 1.0;
  const Vec3 h2{0.5 * (1.0 + x * x + z2_sign * z * z - ys * ys), -z + x * ys, ys + x * z};
  return {h1, h2};
}

FieldSample field_at(const SpacetimePoint& p, FieldVariant variant) {
  const auto [a, pp, q] = aux_quantities(p);
  const auto [h1, h2] = h_vectors(p, variant);
  const double s = a * a + p.t * p.t;
  const double inv = 1.0 / (s * s * s);
  return {(q * h1 + pp * h2) * inv, (q * h2 - pp * h1) * inv};
}

FieldSample cauchy_fields(const Vec3& r) {
  const auto [x, y, z] = r;
  const double s = 1.0 + norm2(r);
  const double k = 8.0 / (s * s * s);
  const Vec3 b{y - x * z, -x - y * z, 0.5 * (-1.0 - z * z + x * x + y * y)};
  const Vec3 e{0.5 * (1.0 + x * x - y * y - z * z), -z + x * y, y + x * z};
  return {k * b, k * e};
}

Potentials potentials_t0(const Vec3& r) {
  const auto [x, y, z] = r;
  const double s = 1.0 + norm2(r);
  const double k = 2.0 / (s * s);
  return {k * Vec3{y, -x, -1.0}, k * Vec3{1.0, -z, y}};
}

MapPair hopf_maps_t0(const Vec3& r) {
  const auto [x, y, z] = r;
  const double w = norm2(r) - 1.0;
  const SpacetimePoint p{r, 0.0};
  return {checked_ratio({2.0 * x, 2.0 * y}, {2.0 * z, w}, "phi0", p),
          checked_ratio({2.0 * y, 2.0 * z}, {2.0 * x, w}, "theta0", p)};
}

MapPair time_maps(const SpacetimePoint& p) {
  const RawMaps m = raw_maps(p);
  return {checked_ratio(m.phi.num, m.phi.den, "phi", p),
          checked_ratio(m.theta.num, m.theta.den, "theta", p)};
}

std::pair<ComplexScalar, ComplexScalar> map_denominators(const SpacetimePoint& p) {
  const RawMaps m = raw_maps(p);
  return {m.phi.den, m.theta.den};
}

FieldSample fields_from_maps(const SpacetimePoint& p, double fd_step) {
  if (!(fd_step > 0.0)) throw InvalidArgumentError("fd_step must be positive");
  for (const bool theta_map : {false, true}) {
    if (pole_distance_estimate(p, theta_map, fd_step) < fd_step) {
      throw PoleProximityError(std::string("point ") + describe(p) + " is within fd_step of a " +
                               (theta_map ? "theta" : "phi") + " pole");
    }
  }

  const ChartGradient phi = chart_gradient(p, false, fd_step);
  const ChartGradient theta = chart_gradient(p, true, fd_step);

  const double dphi = 1.0 + std::norm(phi.value);
  const double dtheta = 1.0 + std::norm(theta.value);
  const FieldSample out{half_imag_cross(phi.grad, conj3(phi.grad)) / (dphi * dphi),
                        half_imag_cross(conj3(theta.grad), theta.grad) / (dtheta * dtheta)};
  if (!is_finite(out.b) || !is_finite(out.e)) {
    throw NonFiniteError("non-finite field reconstructed from maps at " + describe(p));
  }
  return out;
}

}  // namespace knotlab
