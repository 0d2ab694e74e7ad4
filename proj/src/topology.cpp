#include "knotlab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "knotlab/errors.hpp"
#include "knotlab/ode.hpp"
#include "knotlab/quadrature.hpp"

namespace knotlab {

namespace {

using State3 = ode::State<3>;

Vec3 to_vec(const State3& s) { return {s[0], s[1], s[2]}; }

Vec3 field_of(const Vec3& r, double t, FieldKind which, FieldVariant variant) {
  const FieldSample f = field_at({r, t}, variant);
  return which == FieldKind::magnetic ? f.b : f.e;
}

struct Closure {
  double s = 0.0;
  double gap = 0.0;
};

// Closest approach to `target` within one dense segment restricted to
// s >= s_floor: coarse scan then golden-section refinement.
Closure closest_in_segment(const ode::DenseSegment<3>& seg, const Vec3& target, double s_floor) {
  const double lo = std::max(seg.t0, s_floor);
  const double hi = seg.t1();
  auto dist = [&](double s) { return norm(to_vec(seg(s)) - target); };
  constexpr int kScan = 16;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double d = dist(lo + (hi - lo) * i / kScan);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / kScan;
  double b = lo + (hi - lo) * std::min(kScan, best + 1) / kScan;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = dist(c);
  double fd = dist(d);
  for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = dist(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = dist(d);
    }
  }
  const double s = 0.5 * (a + b);
  const double ds = dist(s);
  if (ds < best_d) return {s, ds};
  return {lo + (hi - lo) * best / kScan, best_d};
}

// Closest distance between segments p0+s*d1 and q0+t*d2, s,t in [0,1].
double segment_distance(const Vec3& p0, const Vec3& d1, const Vec3& q0, const Vec3& d2) {
  const Vec3 r = p0 - q0;
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  const double c = dot(d1, r);
  const double b = dot(d1, d2);
  const double denom = a * e - b * b;
  double s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  double t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return norm(r + s * d1 - t * d2);
}

}  // namespace

std::string_view to_string(FieldKind kind) {
  return kind == FieldKind::magnetic ? "magnetic" : "electric";
}

FieldLine trace_field_line(const Vec3& start, double t, FieldKind which,
                           const TraceControl& control) {
  if (control.points < 3) throw InvalidArgumentError("a field line needs at least 3 points");
  if (norm(field_of(start, t, which, control.variant)) < 1e-12) {
    throw ZeroFieldError("field vanishes at the requested start point");
  }

  auto rhs = [&](double, const State3& y) -> std::optional<State3> {
    const Vec3 f = field_of(to_vec(y), t, which, control.variant);
    const double n = norm(f);
    if (!(n > 0.0) || !std::isfinite(n)) return std::nullopt;
    return State3{f.x / n, f.y / n, f.z / n};
  };

  ode::StepControl ctl;
  ctl.rel_tol = control.rel_tol;
  ctl.abs_tol = control.abs_tol;
  ctl.max_step = control.max_step;
  ctl.initial_step = std::min(1e-3, control.max_step);

  std::vector<ode::DenseSegment<3>> segments;
  std::optional<Closure> closure;
  auto observer = [&](const ode::DenseSegment<3>& seg) {
    segments.push_back(seg);
    if (seg.t1() < control.min_arclength_before_closure) return true;
    const Closure c = closest_in_segment(seg, start, control.min_arclength_before_closure);
    if (c.gap < control.closure_radius) {
      closure = c;
      return false;
    }
    return true;
  };
  const auto res = ode::integrate<3>(rhs, 0.0, State3{start.x, start.y, start.z},
                                     control.max_arclength, ctl, observer);

  FieldLine line;
  line.closed = closure.has_value();
  line.length = closure ? closure->s : res.t;
  line.closure_gap = closure ? closure->gap : norm(to_vec(res.y) - start);

  const int n = control.points;
  line.points.reserve(static_cast<std::size_t>(n) + 1);
  std::size_t seg_index = 0;
  for (int i = 0; i < n; ++i) {
    const double s = line.length * i / n;
    while (seg_index + 1 < segments.size() && segments[seg_index].t1() < s) ++seg_index;
    line.points.push_back(i == 0 ? start : to_vec(segments[seg_index](s)));
  }
  if (line.closed) {
    line.points.push_back(start);
  } else {
    line.points.push_back(to_vec(res.y));
  }
  return line;
}

FieldLine reversed(const FieldLine& line) {
  FieldLine out = line;
  std::reverse(out.points.begin(), out.points.end());
  return out;
}

LinkingResult gauss_linking_number(const FieldLine& c1, const FieldLine& c2, double min_separation,
                                   ExecPolicy exec) {
  if (!c1.closed || !c2.closed) throw OpenCurveError("linking number needs two closed curves");
  if (c1.points.size() < 3 || c2.points.size() < 3) {
    throw OpenCurveError("closed curves need at least 3 points");
  }

  struct Segment {
    Vec3 start;
    Vec3 mid;
    Vec3 delta;
  };
  auto segments_of = [](const FieldLine& c) {
    std::vector<Segment> segs;
    segs.reserve(c.points.size() - 1);
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
      segs.push_back({c.points[i], 0.5 * (c.points[i] + c.points[i + 1]),
                      c.points[i + 1] - c.points[i]});
    }
    return segs;
  };
  const auto s1 = segments_of(c1);
  const auto s2 = segments_of(c2);

  std::vector<double> rows(s1.size(), 0.0);
  std::vector<double> row_min(s1.size(), std::numeric_limits<double>::infinity());
  parallel_for(s1.size(), exec, [&](std::size_t i) {
    std::vector<double> terms(s2.size());
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s2.size(); ++j) {
      const Vec3 r = s1[i].mid - s2[j].mid;
      const double d = norm(r);
      dmin = std::min(dmin, segment_distance(s1[i].start, s1[i].delta, s2[j].start, s2[j].delta));
      terms[j] = dot(r, cross(s1[i].delta, s2[j].delta)) / (d * d * d);
    }
    rows[i] = pairwise_sum(terms);
    row_min[i] = dmin;
  });

  LinkingResult out;
  out.min_distance = *std::min_element(row_min.begin(), row_min.end());
  if (out.min_distance < min_separation) {
    throw NearIntersectionError("curves come within " + std::to_string(out.min_distance) +
                                " of each other");
  }
  out.raw = pairwise_sum(rows) / (4.0 * std::numbers::pi);
  out.rounded = std::lround(out.raw);
  out.deviation = std::abs(out.raw - static_cast<double>(out.rounded));
  return out;
}

}  // namespace knotlab
