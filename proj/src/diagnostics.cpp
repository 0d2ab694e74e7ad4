#include "knotlab/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "knotlab/errors.hpp"

namespace knotlab {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

}  // namespace

double energy_density(const SpacetimePoint& p) {
  const auto [x, y, z] = p.position;
  const double t = p.t;
  const double a = 0.5 * (norm2(p.position) - t * t + 1.0);
  const double ys = y + t;
  const double num = 1.0 + x * x + ys * ys + z * z;
  const double s = a * a + t * t;
  return num * num / (4.0 * kPi2 * s * s * s);
}

double energy_density_from_fields(const SpacetimePoint& p, FieldVariant variant) {
  const FieldSample f = field_at(p, variant);
  return (norm2(f.e) + norm2(f.b)) / (2.0 * kPi2);
}

IntegralEstimate total_energy(double t, const GridSpec& spec, ExecPolicy exec) {
  return integrate_r3([t](const Vec3& r) { return energy_density({r, t}); }, spec, exec);
}

VecIntegralEstimate poynting_total(double t, const GridSpec& spec, ExecPolicy exec) {
  auto est = integrate_r3_vec(
      [t](const Vec3& r) {
        const FieldSample f = field_at({r, t});
        return cross(f.e, f.b) / kPi2;
      },
      spec, exec);
  return est;
}

Helicities helicities_t0(const GridSpec& spec, ExecPolicy exec) {
  const auto magnetic = integrate_r3(
      [](const Vec3& r) { return dot(potentials_t0(r).a_pot, cauchy_fields(r).b) / (2.0 * kPi2); },
      spec, exec);
  const auto electric = integrate_r3(
      [](const Vec3& r) { return dot(potentials_t0(r).c_pot, cauchy_fields(r).e) / (2.0 * kPi2); },
      spec, exec);
  return {magnetic, electric};
}

Vec3 energy_max_position(double t) {
  if (!(t >= 0.0 && t <= 2.0)) {
    throw InvalidArgumentError("energy_max_position requires 0 <= T <= 2");
  }
  auto u = [t](double y) { return energy_density({{0.0, y, 0.0}, t}); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -1.0;
  double hi = t + 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = u(c);
  double fd = u(d);
  while (hi - lo > 1e-10) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = u(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = u(d);
    }
  }
  return {0.0, 0.5 * (lo + hi), 0.0};
}

double approximate_max_y(double t) { return t * (1.0 + 6.0 * t * t) / (2.0 + 6.0 * t * t); }

double mean_quadratic_radius_about(const Vec3& centre, double t, const GridSpec& spec,
                                   ExecPolicy exec) {
  const double energy = total_energy(t, spec, exec).value;
  const double moment = integrate_r3(
      [&](const Vec3& r) { return norm2(r - centre) * energy_density({r, t}); }, spec, exec).value;
  return std::sqrt(moment / energy);
}

double mean_quadratic_radius(double t, const GridSpec& spec, ExecPolicy exec) {
  return mean_quadratic_radius_about(energy_max_position(t), t, spec, exec);
}

double energy_fraction_within(double radius, const Vec3& centre, double t, const GridSpec& spec,
                              ExecPolicy exec) {
  if (!(radius > 0.0)) throw InvalidArgumentError("radius must be positive");
  auto u = [t](const Vec3& r) { return energy_density({r, t}); };
  const double inside = integrate_ball(u, centre, radius, spec, exec).value;
  const double total = integrate_r3(u, spec, exec).value;
  return std::clamp(inside / total, 0.0, 1.0);
}

SecondMoments second_moments(const Vec3& centre, double t, const GridSpec& spec, ExecPolicy exec) {
  const double energy = total_energy(t, spec, exec).value;
  SecondMoments out;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double m = integrate_r3(
                           [&](const Vec3& r) {
                             const Vec3 d = r - centre;
                             return d[i] * d[j] * energy_density({r, t});
                           },
                           spec, exec)
                           .value /
                       energy;
      out.tensor[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m;
      out.tensor[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = m;
    }
  }
  Eigen::Matrix3d mat;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      mat(i, j) = out.tensor[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(mat, Eigen::EigenvaluesOnly);
  for (int i = 0; i < 3; ++i) out.eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return out;
}

EnergyReport energy_report(double t, const GridSpec& spec, ExecPolicy exec) {
  EnergyReport rep;
  rep.time = t;
  const IntegralEstimate e = total_energy(t, spec, exec);
  rep.total_energy = e.value;
  rep.total_energy_error = e.error_estimate;
  rep.max_position = energy_max_position(t);
  rep.max_density = energy_density({rep.max_position, t});
  rep.mean_quadratic_radius = mean_quadratic_radius_about(rep.max_position, t, spec, exec);
  rep.fraction_within_unit_ball = energy_fraction_within(1.0, {}, t, spec, exec);
  rep.momentum = poynting_total(t, spec, exec).value;
  rep.moment_eigenvalues = second_moments(rep.max_position, t, spec, exec).eigenvalues;
  return rep;
}

std::vector<GridRow> grid_export(double t, const Vec3& lo, const Vec3& hi,
                                 const std::array<int, 3>& resolution, FieldVariant variant) {
  for (const int n : resolution) {
    if (n < 2) throw InvalidArgumentError("grid_export needs at least 2 points per axis");
  }
  auto coord = [&](int axis, int i) {
    const int n = resolution[static_cast<std::size_t>(axis)];
    return lo[axis] + (hi[axis] - lo[axis]) * static_cast<double>(i) / (n - 1);
  };
  std::vector<GridRow> rows;
  rows.reserve(static_cast<std::size_t>(resolution[0]) * static_cast<std::size_t>(resolution[1]) *
               static_cast<std::size_t>(resolution[2]));
  for (int i = 0; i < resolution[0]; ++i) {
    for (int j = 0; j < resolution[1]; ++j) {
      for (int k = 0; k < resolution[2]; ++k) {
        const SpacetimePoint p{{coord(0, i), coord(1, j), coord(2, k)}, t};
        rows.push_back({p.position, energy_density(p), field_at(p, variant)});
      }
    }
  }
  return rows;
}

}  // namespace knotlab
