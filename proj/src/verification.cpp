#include "knotlab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "knotlab/diagnostics.hpp"
#include "knotlab/errors.hpp"

namespace knotlab {

namespace {

constexpr double kScaleFloor = 1e-30;

// (1/pi^2) * integral of e x b; momentum density equals energy density for a
// null field, and this integral works out to half the total energy.
const Vec3 kDerivedMomentum{0.0, 1.0, 0.0};

template <typename F>
Vec3 partial(const F& f, const SpacetimePoint& p, int axis, double h) {
  SpacetimePoint plus = p;
  SpacetimePoint minus = p;
  if (axis < 3) {
    plus.position[axis] += h;
    minus.position[axis] -= h;
  } else {
    plus.t += h;
    minus.t -= h;
  }
  return (f(plus) - f(minus)) / (2.0 * h);
}

struct Jacobian {
  std::array<Vec3, 4> d;  ///< d/dX, d/dY, d/dZ, d/dT

  double divergence() const { return d[0].x + d[1].y + d[2].z; }
  Vec3 curl() const { return {d[1].z - d[2].y, d[2].x - d[0].z, d[0].y - d[1].x}; }
};

template <typename F>
Jacobian jacobian(const F& f, const SpacetimePoint& p, double h) {
  Jacobian j;
  for (int k = 0; k < 4; ++k) j.d[static_cast<std::size_t>(k)] = partial(f, p, k, h);
  return j;
}

}  // namespace

std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

SpacetimePoint random_event(Rng& rng) {
  SpacetimePoint p;
  p.position.x = rng.uniform(-3.0, 3.0);
  p.position.y = rng.uniform(-3.0, 3.0);
  p.position.z = rng.uniform(-3.0, 3.0);
  p.t = rng.uniform(0.0, 3.0);
  return p;
}

CheckReport make_report(std::string name, std::int64_t samples, double max_residual,
                        double tolerance) {
  return {std::move(name), samples, max_residual, tolerance,
          std::isfinite(max_residual) && max_residual <= tolerance};
}

CheckReport check_null_field(std::int64_t n_samples, std::uint64_t seed, FieldVariant variant) {
  if (n_samples <= 0) throw InvalidArgumentError("n_samples must be positive");
  Rng rng(seed);
  double worst = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const FieldSample f = field_at(random_event(rng), variant);
    const double eb = norm(f.e) * norm(f.b) + kScaleFloor;
    const double e2b2 = norm2(f.e) + norm2(f.b) + kScaleFloor;
    worst = std::max({worst, std::abs(dot(f.e, f.b)) / eb, std::abs(norm2(f.e) - norm2(f.b)) / e2b2});
  }
  return make_report("null_field", n_samples, worst, 1e-12);
}

double MaxwellResiduals::max() const { return std::max({div_b, div_e, faraday, ampere}); }

MaxwellResiduals maxwell_residuals(const SpacetimePoint& p, double h, FieldVariant variant) {
  if (!(h > 0.0)) throw InvalidArgumentError("fd_step must be positive");
  const auto b_of = [variant](const SpacetimePoint& q) { return field_at(q, variant).b; };
  const auto e_of = [variant](const SpacetimePoint& q) { return field_at(q, variant).e; };
  const Jacobian jb = jacobian(b_of, p, h);
  const Jacobian je = jacobian(e_of, p, h);
  const FieldSample f = field_at(p, variant);
  const double scale = norm(f.e) + norm(f.b) + kScaleFloor;
  return {std::abs(jb.divergence()) / scale, std::abs(je.divergence()) / scale,
          norm(je.curl() + jb.d[3]) / scale, norm(jb.curl() - je.d[3]) / scale};
}

CheckReport check_maxwell(std::int64_t n_samples, double fd_step, std::uint64_t seed,
                          FieldVariant variant) {
  if (n_samples <= 0) throw InvalidArgumentError("n_samples must be positive");
  Rng rng(seed);
  double worst = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    worst = std::max(worst, maxwell_residuals(random_event(rng), fd_step, variant).max());
  }
  return make_report("maxwell", n_samples, worst, 1e-6);
}

std::vector<CheckReport> check_representations(std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples <= 0) throw InvalidArgumentError("n_samples must be positive");
  Rng rng(seed);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  double cauchy_ulps = 0.0;
  double maps_rel = 0.0;
  double curl_rel = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Vec3 r = random_event(rng).position;
    const FieldSample closed = field_at({r, 0.0});
    const FieldSample cauchy = cauchy_fields(r);
    const double mag = std::max(norm(cauchy.b), norm(cauchy.e)) + kScaleFloor;
    for (int c = 0; c < 3; ++c) {
      cauchy_ulps = std::max({cauchy_ulps, std::abs(closed.b[c] - cauchy.b[c]) / (eps * mag),
                              std::abs(closed.e[c] - cauchy.e[c]) / (eps * mag)});
    }

    const double h = kDefaultFdStep;
    const auto a_of = [](const SpacetimePoint& q) { return potentials_t0(q.position).a_pot; };
    const auto c_of = [](const SpacetimePoint& q) { return potentials_t0(q.position).c_pot; };
    const Vec3 curl_a = jacobian(a_of, {r, 0.0}, h).curl();
    const Vec3 curl_c = jacobian(c_of, {r, 0.0}, h).curl();
    const double scale = norm(cauchy.b) + norm(cauchy.e) + kScaleFloor;
    curl_rel = std::max({curl_rel, norm(curl_a - cauchy.b) / scale, norm(curl_c - cauchy.e) / scale});
  }

  std::int64_t accepted = 0;
  while (accepted < n_samples) {
    const SpacetimePoint p = random_event(rng);
    FieldSample from_maps;
    try {
      from_maps = fields_from_maps(p, kDefaultFdStep);
    } catch (const PoleProximityError&) {
      continue;
    }
    const FieldSample closed = field_at(p);
    const double scale = norm(closed.b) + norm(closed.e) + kScaleFloor;
    maps_rel = std::max({maps_rel, norm(from_maps.b - closed.b) / scale,
                         norm(from_maps.e - closed.e) / scale});
    ++accepted;
  }

  return {make_report("representations.cauchy_ulps", n_samples, cauchy_ulps, 4.0),
          make_report("representations.map_pullback", n_samples, maps_rel, 1e-6),
          make_report("representations.potential_curl", n_samples, curl_rel, 1e-5)};
}

std::vector<CheckReport> conservation_sweep(const std::vector<double>& times, const GridSpec& spec,
                                            ExecPolicy exec) {
  if (times.empty()) throw InvalidArgumentError("conservation_sweep needs at least one time");
  double e_lo = std::numeric_limits<double>::infinity();
  double e_hi = -e_lo;
  double p_lo = e_lo;
  double p_hi = -e_lo;
  double e_dev = 0.0;
  double p_dev = 0.0;
  for (const double t : times) {
    const double e = total_energy(t, spec, exec).value;
    const Vec3 p = poynting_total(t, spec, exec).value;
    e_lo = std::min(e_lo, e);
    e_hi = std::max(e_hi, e);
    p_lo = std::min(p_lo, p.y);
    p_hi = std::max(p_hi, p.y);
    e_dev = std::max(e_dev, std::abs(e - 2.0));
    p_dev = std::max(p_dev, norm(p - kDerivedMomentum));
  }
  const auto n = static_cast<std::int64_t>(times.size());
  return {make_report("conservation.energy_spread", n, e_hi - e_lo, 1e-5),
          make_report("conservation.momentum_y_spread", n, p_hi - p_lo, 1e-4),
          make_report("conservation.energy_value", n, e_dev, 1e-5),
          make_report("conservation.momentum_value", n, p_dev, 1e-4)};
}

std::vector<CheckReport> verify_all(std::uint64_t seed, ExecPolicy exec, double fd_step) {
  std::vector<CheckReport> out;
  out.push_back(check_null_field(10'000, seed));

  CheckReport maxwell = check_maxwell(100, fd_step, seed);
  const CheckReport maxwell_half = check_maxwell(100, 0.5 * fd_step, seed);
  out.push_back(maxwell);
  out.push_back(make_report("maxwell.order_ratio_deviation", 100,
                            std::abs(maxwell.max_residual / maxwell_half.max_residual - 4.0), 1.0));

  for (auto& r : check_representations(100, seed)) out.push_back(std::move(r));
  for (auto& r : conservation_sweep({0.0, 0.5, 1.0, 1.5}, {}, exec)) out.push_back(std::move(r));

  const Helicities h = helicities_t0({}, exec);
  out.push_back(make_report("helicity.magnetic", 1, std::abs(h.magnetic.value - 0.5), 1e-5));
  out.push_back(make_report("helicity.electric", 1, std::abs(h.electric.value - 0.5), 1e-5));
  return out;
}

}  // namespace knotlab
