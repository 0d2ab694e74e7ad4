#pragma once

/// Field-line tracing and the Gauss linking number of closed polylines.

#include <string_view>
#include <vector>

#include "knotlab/knot_fields.hpp"
#include "knotlab/parallel.hpp"

namespace knotlab {

enum class FieldKind { magnetic, electric };

std::string_view to_string(FieldKind kind);

struct FieldLine {
  std::vector<Vec3> points;  ///< for closed lines the last point equals the first
  bool closed = false;
  double closure_gap = 0.0;  ///< closest return distance to the start
  double length = 0.0;       ///< arclength traced
};

struct TraceControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.05;
  double max_arclength = 60.0;
  double closure_radius = 1e-3;
  double min_arclength_before_closure = 0.1;
  /// Closed lines are resampled to this many points, uniform in arclength.
  int points = 2000;
  FieldVariant variant = FieldVariant::standard;
};

/// Integrates dr/ds = F/|F| from start until the curve re-enters the closure
/// ball around start (after min_arclength_before_closure) or max_arclength is
/// reached. On closure the endpoint is snapped onto the start.
///
/// Throws ZeroFieldError if |F(start)| is below 1e-12. An open result
/// (closed = false) is returned, not thrown, if max_arclength is exceeded.
FieldLine trace_field_line(const Vec3& start, double t, FieldKind which,
                           const TraceControl& control = {});

struct LinkingResult {
  double raw = 0.0;
  long rounded = 0;
  double deviation = 0.0;  ///< |raw - rounded|
  double min_distance = 0.0;  ///< closest approach of any two segments
};

/// Midpoint-rule Gauss double integral
///   (1/4pi) sum_ij (m1_i - m2_j) . (d1_i x d2_j) / |m1_i - m2_j|^3
/// over the segments of two closed polylines.
///
/// Throws OpenCurveError if either line is open and NearIntersectionError if
/// any two segments come closer than min_separation.
LinkingResult gauss_linking_number(const FieldLine& c1, const FieldLine& c2,
                                   double min_separation = 1e-3, ExecPolicy exec = {});

/// Same line traversed backwards.
FieldLine reversed(const FieldLine& line);

}  // namespace knotlab
