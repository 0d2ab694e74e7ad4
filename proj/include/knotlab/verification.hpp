#pragma once

/// Seeded property checks on the knot field and its integrals.
///
/// Random events are drawn from SplitMix64 (see Rng below) so that reports
/// are reproducible across platforms and implementations.

#include <cstdint>
#include <string>
#include <vector>

#include "knotlab/knot_fields.hpp"
#include "knotlab/quadrature.hpp"

namespace knotlab {

/// SplitMix64 (Steele, Lea & Flood 2014):
///   state += 0x9E3779B97F4A7C15;
///   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31);
/// uniform() maps the top 53 bits to [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Event uniformly distributed in [-3,3]^3 x [0,3] (X, Y, Z then T).
SpacetimePoint random_event(Rng& rng);

struct CheckReport {
  std::string check_name;
  std::int64_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

CheckReport make_report(std::string name, std::int64_t samples, double max_residual,
                        double tolerance);

/// max over events of |e.b|/(|e||b|) and ||e|^2-|b|^2|/(|e|^2+|b|^2).
CheckReport check_null_field(std::int64_t n_samples, std::uint64_t seed,
                             FieldVariant variant = FieldVariant::standard);

/// Individual normalised Maxwell residuals at one event.
struct MaxwellResiduals {
  double div_b = 0.0;
  double div_e = 0.0;
  double faraday = 0.0;  ///< |curl e + db/dT|
  double ampere = 0.0;   ///< |curl b - de/dT|

  double max() const;
};

/// Central differences with step h, divided by |e| + |b| + 1e-30.
MaxwellResiduals maxwell_residuals(const SpacetimePoint& p, double h,
                                   FieldVariant variant = FieldVariant::standard);

CheckReport check_maxwell(std::int64_t n_samples, double fd_step, std::uint64_t seed,
                          FieldVariant variant = FieldVariant::standard);

/// Three reports: closed form vs Cauchy data at T=0 (4 ulp, as relative
/// error), closed form vs map pullback (1e-6 relative), curl of the
/// potentials vs Cauchy data (1e-5 relative). Events that fall within one
/// difference step of a map pole are redrawn.
std::vector<CheckReport> check_representations(std::int64_t n_samples, std::uint64_t seed);

/// Energy and momentum at each time: spread of the total energy (1e-5),
/// spread of the momentum y component (1e-4), and deviation from the exact
/// values 2 and (0, 1, 0) (1e-5 and 1e-4).
std::vector<CheckReport> conservation_sweep(const std::vector<double>& times,
                                            const GridSpec& spec = {}, ExecPolicy exec = {});

/// Everything the `verify all` command runs. fd_step is the Maxwell
/// difference step; the order check also runs at fd_step/2.
std::vector<CheckReport> verify_all(std::uint64_t seed, ExecPolicy exec = {},
                                    double fd_step = kDefaultFdStep);

}  // namespace knotlab
