#include "knotlab/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "knotlab/errors.hpp"

namespace knotlab {

namespace {

struct Direction {
  Vec3 unit;
  double weight;
};

std::vector<Direction> angular_grid(const GridSpec& spec) {
  const QuadratureRule ct = gauss_legendre(spec.angular_nodes_theta);
  const QuadratureRule ph = gauss_legendre(spec.angular_nodes_phi, 0.0, 2.0 * std::numbers::pi);
  std::vector<Direction> dirs;
  dirs.reserve(ct.nodes.size() * ph.nodes.size());
  for (std::size_t j = 0; j < ct.nodes.size(); ++j) {
    const double c = ct.nodes[j];
    const double s = std::sqrt((1.0 - c) * (1.0 + c));
    for (std::size_t k = 0; k < ph.nodes.size(); ++k) {
      dirs.push_back({{s * std::cos(ph.nodes[k]), s * std::sin(ph.nodes[k]), c},
                      ct.weights[j] * ph.weights[k]});
    }
  }
  return dirs;
}

// Radial nodes with r^2 dr folded into the weights.
QuadratureRule compactified_radial(int n, double scale) {
  QuadratureRule u = gauss_legendre(n, 0.0, 1.0);
  for (std::size_t i = 0; i < u.nodes.size(); ++i) {
    const double ui = u.nodes[i];
    const double r = scale * ui / (1.0 - ui);
    const double jac = scale / ((1.0 - ui) * (1.0 - ui));
    u.nodes[i] = r;
    u.weights[i] *= r * r * jac;
  }
  return u;
}

QuadratureRule ball_radial(int n, double radius) {
  QuadratureRule rule = gauss_legendre(n, 0.0, radius);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.weights[i] *= rule.nodes[i] * rule.nodes[i];
  }
  return rule;
}

template <std::size_t N, typename F>
std::array<double, N> spherical_sum(const F& f, const Vec3& centre, const QuadratureRule& radial,
                                    const std::vector<Direction>& dirs, ExecPolicy exec) {
  const std::size_t nr = radial.nodes.size();
  std::array<std::vector<double>, N> shells;
  for (auto& s : shells) s.assign(nr, 0.0);

  parallel_for(nr, exec, [&](std::size_t i) {
    const double r = radial.nodes[i];
    std::array<std::vector<double>, N> terms;
    for (auto& t : terms) t.resize(dirs.size());
    for (std::size_t m = 0; m < dirs.size(); ++m) {
      const Vec3 point = centre + r * dirs[m].unit;
      const std::array<double, N> v = f(point);
      for (std::size_t c = 0; c < N; ++c) {
        if (!std::isfinite(v[c])) {
          throw NonFiniteError("non-finite integrand at (" + std::to_string(point.x) + ", " +
                               std::to_string(point.y) + ", " + std::to_string(point.z) + ")");
        }
        terms[c][m] = dirs[m].weight * v[c];
      }
    }
    for (std::size_t c = 0; c < N; ++c) shells[c][i] = radial.weights[i] * pairwise_sum(terms[c]);
  });

  std::array<double, N> out{};
  for (std::size_t c = 0; c < N; ++c) out[c] = pairwise_sum(shells[c]);
  return out;
}

int half_resolution(int n) { return std::max(2, n / 2); }

}  // namespace

void GridSpec::validate() const {
  if (radial_nodes < 4 || angular_nodes_theta < 4 || angular_nodes_phi < 4) {
    throw InvalidArgumentError("GridSpec node counts must be >= 4");
  }
  if (!(radial_map_scale > 0.0) || !std::isfinite(radial_map_scale)) {
    throw InvalidArgumentError("GridSpec radial_map_scale must be positive");
  }
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw InvalidArgumentError("Gauss-Legendre order must be >= 1");
  QuadratureRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // Refresh the derivative at the converged root for the weight.
    {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    const double w = 2.0 * half / ((1.0 - z * z) * dp * dp);
    const auto lo_i = static_cast<std::size_t>(i);
    const auto hi_i = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo_i] = mid - half * z;
    rule.nodes[hi_i] = mid + half * z;
    rule.weights[lo_i] = w;
    rule.weights[hi_i] = w;
  }
  return rule;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

IntegralEstimate integrate_r3(const ScalarDensity& density, const GridSpec& spec, ExecPolicy exec) {
  spec.validate();
  const auto dirs = angular_grid(spec);
  auto f = [&](const Vec3& r) { return std::array<double, 1>{density(r)}; };
  const double fine = spherical_sum<1>(
      f, {}, compactified_radial(spec.radial_nodes, spec.radial_map_scale), dirs, exec)[0];
  const double coarse =
      spherical_sum<1>(f, {},
                       compactified_radial(half_resolution(spec.radial_nodes), spec.radial_map_scale),
                       dirs, exec)[0];
  return {fine, std::abs(fine - coarse)};
}

VecIntegralEstimate integrate_r3_vec(const VectorDensity& density, const GridSpec& spec,
                                     ExecPolicy exec) {
  spec.validate();
  const auto dirs = angular_grid(spec);
  auto f = [&](const Vec3& r) {
    const Vec3 v = density(r);
    return std::array<double, 3>{v.x, v.y, v.z};
  };
  const auto fine = spherical_sum<3>(
      f, {}, compactified_radial(spec.radial_nodes, spec.radial_map_scale), dirs, exec);
  const auto coarse = spherical_sum<3>(
      f, {}, compactified_radial(half_resolution(spec.radial_nodes), spec.radial_map_scale), dirs,
      exec);
  const Vec3 value{fine[0], fine[1], fine[2]};
  return {value, norm(value - Vec3{coarse[0], coarse[1], coarse[2]})};
}

IntegralEstimate integrate_ball(const ScalarDensity& density, const Vec3& centre, double radius,
                                const GridSpec& spec, ExecPolicy exec) {
  spec.validate();
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgumentError("ball radius must be positive and finite");
  }
  const auto dirs = angular_grid(spec);
  auto f = [&](const Vec3& r) { return std::array<double, 1>{density(r)}; };
  const double fine =
      spherical_sum<1>(f, centre, ball_radial(spec.radial_nodes, radius), dirs, exec)[0];
  const double coarse = spherical_sum<1>(
      f, centre, ball_radial(half_resolution(spec.radial_nodes), radius), dirs, exec)[0];
  return {fine, std::abs(fine - coarse)};
}

}  // namespace knotlab
