#pragma once

/// Dormand-Prince 5(4) integrator with PI step-size control and the
/// classic fourth-order continuous extension.
///
/// The right-hand side returns std::nullopt when asked to evaluate a state
/// outside its domain (e.g. |V| >= 1); the step is then rejected and retried
/// with half the step size. Integration runs forwards or backwards in time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>

#include "knotlab/errors.hpp"

namespace knotlab::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double initial_step = 1e-3;
  double max_step = std::numeric_limits<double>::infinity();
  double safety = 0.9;
  double beta = 0.04;       ///< PI (Lund) stabilisation exponent
  double min_factor = 0.2;  ///< step may shrink at most 5x per step
  double max_factor = 10.0;
  std::size_t max_steps = 10'000'000;
};

/// Continuous extension over one accepted step.
template <std::size_t N>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> coeff{};

  double t1() const { return t0 + h; }

  State<N> operator()(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = coeff[0][i] +
             s * (coeff[1][i] + s1 * (coeff[2][i] + s * (coeff[3][i] + s1 * coeff[4][i])));
    }
    return y;
  }
};

template <std::size_t N>
struct Result {
  double t = 0.0;
  State<N> y{};
  std::size_t steps_taken = 0;
  std::size_t steps_rejected = 0;
  bool stopped_early = false;  ///< observer asked to stop before t_end
};

namespace detail {

// Dormand & Prince (1980) tableau, with Shampine's dense-output weights.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (std::size_t i = 0; i < N; ++i) {
    double acc = 0.0;
    for (const auto& [c, k] : terms) acc += c * (*k)[i];
    out[i] += h * acc;
  }
  return out;
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t_end.
///
/// `observer(segment)` is called after every accepted step and returns false
/// to stop. Throws StepSizeUnderflowError when |h| falls below 1e-14 relative
/// to t, or when max_steps is exhausted; throws InvalidArgumentError if the
/// initial state is outside the rhs domain.
template <std::size_t N, typename Rhs, typename Observer>
Result<N> integrate(const Rhs& rhs, double t0, const State<N>& y0, double t_end,
                    const StepControl& ctl, Observer&& observer) {
  using namespace detail;
  Result<N> res;
  res.t = t0;
  res.y = y0;
  if (t_end == t0) return res;
  const double dir = t_end > t0 ? 1.0 : -1.0;

  std::optional<State<N>> k1 = rhs(t0, y0);
  if (!k1) throw InvalidArgumentError("initial state outside the integrator domain");

  double h = dir * std::min(std::abs(ctl.initial_step), ctl.max_step);
  double err_old = 1e-4;
  bool last_rejected = false;
  double t = t0;
  State<N> y = y0;

  const double expo = 0.2 - ctl.beta * 0.75;
  while (dir * (t_end - t) > 0.0) {
    if (res.steps_taken + res.steps_rejected >= ctl.max_steps) {
      throw StepSizeUnderflowError("step budget exhausted at t=" + std::to_string(t), t);
    }
    bool last = false;
    if (dir * (t + h - t_end) >= 0.0) {
      h = t_end - t;
      last = true;
    }
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
      throw StepSizeUnderflowError("step size underflow at t=" + std::to_string(t), t);
    }

    const State<N>& f1 = *k1;
    auto reject_domain = [&] {
      h *= 0.5;
      last_rejected = true;
      ++res.steps_rejected;
    };

    const auto k2 = rhs(t + c2 * h, axpy<N>(y, h, {{a21, &f1}}));
    if (!k2) { reject_domain(); continue; }
    const auto k3 = rhs(t + c3 * h, axpy<N>(y, h, {{a31, &f1}, {a32, &*k2}}));
    if (!k3) { reject_domain(); continue; }
    const auto k4 = rhs(t + c4 * h, axpy<N>(y, h, {{a41, &f1}, {a42, &*k2}, {a43, &*k3}}));
    if (!k4) { reject_domain(); continue; }
    const auto k5 =
        rhs(t + c5 * h, axpy<N>(y, h, {{a51, &f1}, {a52, &*k2}, {a53, &*k3}, {a54, &*k4}}));
    if (!k5) { reject_domain(); continue; }
    const auto k6 = rhs(t + h, axpy<N>(y, h, {{a61, &f1}, {a62, &*k2}, {a63, &*k3}, {a64, &*k4},
                                             {a65, &*k5}}));
    if (!k6) { reject_domain(); continue; }
    const State<N> y_new =
        axpy<N>(y, h, {{a71, &f1}, {a73, &*k3}, {a74, &*k4}, {a75, &*k5}, {a76, &*k6}});
    const double t_new = last ? t_end : t + h;
    const auto k7 = rhs(t_new, y_new);
    if (!k7) { reject_domain(); continue; }

    double err2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double ei = h * (e1 * f1[i] + e3 * (*k3)[i] + e4 * (*k4)[i] + e5 * (*k5)[i] +
                             e6 * (*k6)[i] + e7 * (*k7)[i]);
      err2 += (ei / sc) * (ei / sc);
    }
    const double err = std::sqrt(err2 / static_cast<double>(N));
    const double fac11 = std::pow(err, expo);

    if (err <= 1.0) {
      DenseSegment<N> seg;
      seg.t0 = t;
      seg.h = t_new - t;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = y_new[i] - y[i];
        const double bspl = seg.h * f1[i] - dy;
        seg.coeff[0][i] = y[i];
        seg.coeff[1][i] = dy;
        seg.coeff[2][i] = bspl;
        seg.coeff[3][i] = dy - seg.h * (*k7)[i] - bspl;
        seg.coeff[4][i] = seg.h * (d1 * f1[i] + d3 * (*k3)[i] + d4 * (*k4)[i] + d5 * (*k5)[i] +
                                   d6 * (*k6)[i] + d7 * (*k7)[i]);
      }
      double fac = fac11 / std::pow(err_old, ctl.beta);
      fac = std::clamp(fac / ctl.safety, 1.0 / ctl.max_factor, 1.0 / ctl.min_factor);
      double h_new = h / fac;
      err_old = std::max(err, 1e-4);
      if (last_rejected) h_new = dir * std::min(std::abs(h_new), std::abs(h));
      last_rejected = false;

      t = t_new;
      y = y_new;
      k1 = k7;
      ++res.steps_taken;
      res.t = t;
      res.y = y;
      if (!observer(seg)) {
        res.stopped_early = true;
        return res;
      }
      h = dir * std::min(std::abs(h_new), ctl.max_step);
    } else {
      h /= std::min(1.0 / ctl.min_factor, fac11 / ctl.safety);
      last_rejected = true;
      ++res.steps_rejected;
    }
  }
  return res;
}

template <std::size_t N, typename Rhs>
Result<N> integrate(const Rhs& rhs, double t0, const State<N>& y0, double t_end,
                    const StepControl& ctl) {
  return integrate<N>(rhs, t0, y0, t_end, ctl, [](const DenseSegment<N>&) { return true; });
}

}  // namespace knotlab::ode
