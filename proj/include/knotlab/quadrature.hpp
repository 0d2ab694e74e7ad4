#pragma once

/// Tensor-product Gauss-Legendre integration over R^3 and over balls.
///
/// Spherical coordinates around a centre: Gauss-Legendre in cos(theta) on
/// [-1,1] and in phi on [0,2pi). The radial direction over R^3 uses the
/// compactification r = s u/(1-u), u in (0,1), with Gauss-Legendre in u. Ball
/// integrals use Gauss-Legendre directly on [0, radius].
///
/// Summation is pairwise in a fixed order: shell sums are computed
/// independently per radial node and then reduced by the same tree, so the
/// result is bit-identical for every thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "knotlab/parallel.hpp"
#include "knotlab/vec3.hpp"

namespace knotlab {

struct GridSpec {
  int radial_nodes = 96;
  int angular_nodes_theta = 48;
  int angular_nodes_phi = 96;
  double radial_map_scale = 1.0;

  /// Throws InvalidArgumentError unless all counts are >= 4 and the scale > 0.
  void validate() const;
};

struct IntegralEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
};

struct VecIntegralEstimate {
  Vec3 value;
  double error_estimate = 0.0;  ///< Euclidean norm of the component differences
};

using ScalarDensity = std::function<double(const Vec3&)>;
using VectorDensity = std::function<Vec3(const Vec3&)>;

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi] (Newton iteration on P_n), nodes
/// ascending.
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Pairwise (cascade) sum in index order.
double pairwise_sum(std::span<const double> values);

/// Integral over R^3. error_estimate = |I(n) - I(n/2)| with n radial nodes.
/// Throws NonFiniteError if the density returns NaN/inf at a node.
IntegralEstimate integrate_r3(const ScalarDensity& density, const GridSpec& spec,
                              ExecPolicy exec = {});

VecIntegralEstimate integrate_r3_vec(const VectorDensity& density, const GridSpec& spec,
                                     ExecPolicy exec = {});

/// Integral over the ball |r - centre| <= radius. Uses the same angular
/// resolution as spec and spec.radial_nodes Gauss nodes on [0, radius].
IntegralEstimate integrate_ball(const ScalarDensity& density, const Vec3& centre, double radius,
                                const GridSpec& spec, ExecPolicy exec = {});

}  // namespace knotlab
