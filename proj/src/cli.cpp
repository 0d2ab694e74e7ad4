#include "knotlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "knotlab/topology.hpp"

namespace knotlab {

namespace {

namespace fs = std::filesystem;

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

PushConfig push_config(const RunConfig& c) {
  PushConfig p;
  p.g = c.resolved_g();
  p.t_start = c.t_start;
  p.t_end = c.t_end;
  p.rel_tol = c.rel_tol;
  p.abs_tol = c.abs_tol;
  p.max_step = c.max_step;
  p.output_stride = c.output_stride;
  p.variant = c.variant;
  return p;
}

fs::path prepare_output_dir(const RunConfig& c) {
  const fs::path dir(c.output_dir.empty() ? "." : c.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_text(path, round_numbers(j).dump(2) + "\n");
}

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  bool first = true;
  for (const double v : values) {
    if (!first) row += ',';
    row += format_number(v);
    first = false;
  }
  return row;
}

int fields_sample(const RunConfig& c, std::ostream& out) {
  const fs::path dir = prepare_output_dir(c);
  if (c.point) {
    const SpacetimePoint& p = *c.point;
    const GridRow row{p.position, energy_density(p), field_at(p, c.variant)};
    std::ostringstream os;
    os << csv_header_comment(c, "fields sample");
    write_grid_csv(os, {row});
    write_text(dir / "fields_point.csv", os.str());
    out << "U=" << format_number(row.energy) << " b=(" << format_number(row.fields.b.x) << ", "
        << format_number(row.fields.b.y) << ", " << format_number(row.fields.b.z) << ") e=("
        << format_number(row.fields.e.x) << ", " << format_number(row.fields.e.y) << ", "
        << format_number(row.fields.e.z) << ")\n";
    return 0;
  }
  for (const double t : c.times) {
    const auto rows = grid_export(t, c.bounds_min, c.bounds_max, c.resolution, c.variant);
    std::ostringstream os;
    os << csv_header_comment(c, "fields sample");
    write_grid_csv(os, rows);
    const std::string name = "fields_T" + format_number(t) + ".csv";
    write_text(dir / name, os.str());
    double u_max = 0.0;
    for (const auto& r : rows) u_max = std::max(u_max, r.energy);
    out << name << ": " << rows.size() << " rows, max U=" << format_number(u_max) << "\n";
  }
  return 0;
}

int energy_report_cmd(const RunConfig& c, std::ostream& out) {
  const fs::path dir = prepare_output_dir(c);
  const ExecPolicy exec{c.threads};
  nlohmann::json reports = nlohmann::json::array();
  std::ostringstream csv;
  csv << csv_header_comment(c, "energy report");
  csv << "T,total_energy,max_X,max_Y,max_Z,max_density,mean_quadratic_radius,"
         "fraction_within_unit_ball,Px,Py,Pz\n";
  for (const double t : c.times) {
    const EnergyReport r = energy_report(t, c.grid, exec);
    reports.push_back(energy_report_json(r));
    csv << csv_row({r.time, r.total_energy, r.max_position.x, r.max_position.y, r.max_position.z,
                    r.max_density, r.mean_quadratic_radius, r.fraction_within_unit_ball,
                    r.momentum.x, r.momentum.y, r.momentum.z})
        << "\n";
    out << "T=" << format_number(t) << " total_energy=" << format_number(r.total_energy)
        << " mean_quadratic_radius=" << format_number(r.mean_quadratic_radius)
        << " max_Y=" << format_number(r.max_position.y) << "\n";
  }
  const Helicities h = helicities_t0(c.grid, exec);
  nlohmann::json doc;
  doc["meta"] = meta_json(c, "energy report");
  doc["reports"] = reports;
  doc["helicities_t0"] = {{"magnetic", h.magnetic.value},
                          {"electric", h.electric.value},
                          {"total", h.magnetic.value + h.electric.value}};
  write_json(dir / "energy_report.json", doc);
  write_text(dir / "energy_report.csv", csv.str());
  return 0;
}

int trajectories_run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const fs::path dir = prepare_output_dir(c);
  const PushConfig push = push_config(c);
  const EnsembleResult ens = run_ensemble(paper_ensemble(), push, {c.threads});
  std::ostringstream csv;
  csv << csv_header_comment(c, "trajectories run");
  write_trajectories_csv(csv, ens);
  write_text(dir / "trajectories.csv", csv.str());
  nlohmann::json doc = ensemble_json(ens, push);
  doc["meta"] = meta_json(c, "trajectories run");
  write_json(dir / "ensemble.json", doc);
  out << "g=" << format_number(push.g) << " particles=" << ens.particles.size()
      << " v_min=" << format_number(ens.v_min) << " v_max=" << format_number(ens.v_max)
      << " reversed=" << ens.reversed_count << "\n";
  for (std::size_t i = 0; i < ens.particles.size(); ++i) {
    if (!ens.particles[i].error.empty()) {
      err << "particle " << i << ": " << ens.particles[i].error << "\n";
    }
  }
  return ens.failures == 0 ? 0 : 1;
}

int lines_trace(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const fs::path dir = prepare_output_dir(c);
  const double t = c.times.front();
  TraceControl ctl;
  ctl.points = c.line_points;
  ctl.variant = c.variant;

  std::vector<FieldLine> lines;
  nlohmann::json line_info = nlohmann::json::array();
  bool ok = true;
  for (const auto& s : c.line_starts) {
    lines.push_back(trace_field_line(s.position, t, s.kind, ctl));
    const FieldLine& l = lines.back();
    line_info.push_back({{"kind", std::string(to_string(s.kind))},
                         {"start", vec_json(s.position)},
                         {"closed", l.closed},
                         {"closure_gap", l.closure_gap},
                         {"length", l.length}});
    if (!l.closed) {
      ok = false;
      err << "line from (" << format_number(s.position.x) << ", " << format_number(s.position.y)
          << ", " << format_number(s.position.z) << ") did not close\n";
    }
  }

  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      nlohmann::json p = {{"first", i}, {"second", j}};
      try {
        const LinkingResult lk = gauss_linking_number(lines[i], lines[j], 1e-3, {c.threads});
        p["raw"] = lk.raw;
        p["rounded"] = lk.rounded;
        p["deviation"] = lk.deviation;
        out << "lines " << i << "," << j << ": linking " << lk.rounded
            << " (raw " << format_number(lk.raw) << ")\n";
      } catch (const Error& e) {
        p["error"] = e.what();
        err << "lines " << i << "," << j << ": " << e.what() << "\n";
        ok = false;
      }
      pairs.push_back(p);
    }
  }

  std::ostringstream csv;
  csv << csv_header_comment(c, "lines trace");
  write_lines_csv(csv, lines);
  write_text(dir / "lines.csv", csv.str());
  nlohmann::json doc;
  doc["meta"] = meta_json(c, "lines trace");
  doc["T"] = t;
  doc["lines"] = line_info;
  doc["linking"] = pairs;
  write_json(dir / "linking.json", doc);
  return ok ? 0 : 1;
}

int verify_all_cmd(const RunConfig& c, std::ostream& out) {
  const fs::path dir = prepare_output_dir(c);
  const auto reports = verify_all(c.seed, {c.threads}, c.fd_step);
  nlohmann::json doc;
  doc["meta"] = meta_json(c, "verify all");
  doc["checks"] = reports_json(reports);
  write_json(dir / "verify_report.json", doc);
  bool all = true;
  for (const auto& r : reports) {
    out << (r.passed ? "PASS " : "FAIL ") << r.check_name << " residual="
        << format_number(r.max_residual) << " tol=" << format_number(r.tolerance) << "\n";
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round9(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

nlohmann::json round_numbers(const nlohmann::json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return round9(v);
  }
  if (j.is_array() || j.is_object()) {
    nlohmann::json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = round_numbers(*it);
    return out;
  }
  return j;
}

nlohmann::json meta_json(const RunConfig& config, const std::string& command) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command},
          {"config", config.to_json()}};
}

std::string csv_header_comment(const RunConfig& config, const std::string& command) {
  return std::string("# ") + kToolName + " " + kToolVersion + " " + command + "\n# config: " +
         round_numbers(config.to_json()).dump() + "\n";
}

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows) {
  os << "X,Y,Z,U,Bx,By,Bz,Ex,Ey,Ez\n";
  for (const auto& r : rows) {
    os << csv_row({r.position.x, r.position.y, r.position.z, r.energy, r.fields.b.x, r.fields.b.y,
                   r.fields.b.z, r.fields.e.x, r.fields.e.y, r.fields.e.z})
       << "\n";
  }
}

void write_trajectories_csv(std::ostream& os, const EnsembleResult& ensemble) {
  os << "particle_id,T,X,Y,Z,VX,VY,VZ,speed\n";
  for (std::size_t i = 0; i < ensemble.particles.size(); ++i) {
    const auto& traj = ensemble.particles[i].trajectory;
    if (!traj) continue;
    for (const auto& s : traj->samples) {
      const auto& [r, v] = s.state;
      os << i << ',' << csv_row({s.t, r.x, r.y, r.z, v.x, v.y, v.z, norm(v)}) << "\n";
    }
  }
}

void write_lines_csv(std::ostream& os, const std::vector<FieldLine>& lines) {
  os << "line_id,idx,X,Y,Z\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t k = 0; k < lines[i].points.size(); ++k) {
      const Vec3& p = lines[i].points[k];
      os << i << ',' << k << ',' << csv_row({p.x, p.y, p.z}) << "\n";
    }
  }
}

nlohmann::json reports_json(const std::vector<CheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"check_name", r.check_name},
                   {"samples", r.samples},
                   {"max_residual", r.max_residual},
                   {"tolerance", r.tolerance},
                   {"passed", r.passed}});
  }
  return arr;
}

nlohmann::json ensemble_json(const EnsembleResult& ensemble, const PushConfig& push) {
  nlohmann::json particles = nlohmann::json::array();
  for (std::size_t i = 0; i < ensemble.particles.size(); ++i) {
    const auto& p = ensemble.particles[i];
    nlohmann::json entry = {{"particle_id", i}};
    if (p.trajectory) {
      const ParticleState& s = p.trajectory->final_state();
      entry["initial_position"] = vec_json(p.trajectory->samples.front().state.position);
      entry["final_position"] = vec_json(s.position);
      entry["final_velocity"] = vec_json(s.velocity);
      entry["final_speed"] = norm(s.velocity);
      entry["steps_taken"] = p.trajectory->steps_taken;
      entry["steps_rejected"] = p.trajectory->steps_rejected;
    } else {
      entry["error"] = p.error;
    }
    particles.push_back(entry);
  }
  return {{"g", push.g},
          {"t_end", push.t_end},
          {"v_min", ensemble.v_min},
          {"v_max", ensemble.v_max},
          {"failures", ensemble.failures},
          {"reversed_count", ensemble.reversed_count},
          {"particles", particles}};
}

nlohmann::json energy_report_json(const EnergyReport& r) {
  return {{"time", r.time},
          {"total_energy", r.total_energy},
          {"total_energy_error", r.total_energy_error},
          {"max_position", vec_json(r.max_position)},
          {"max_density", r.max_density},
          {"mean_quadratic_radius", r.mean_quadratic_radius},
          {"fraction_within_unit_ball", r.fraction_within_unit_ball},
          {"momentum", vec_json(r.momentum)},
          {"second_moment_eigenvalues", r.moment_eigenvalues}};
}

int dispatch(const std::string& group, const std::string& action, const RunConfig& config,
             std::ostream& out, std::ostream& err) {
  try {
    if (group == "fields" && action == "sample") return fields_sample(config, out);
    if (group == "energy" && action == "report") return energy_report_cmd(config, out);
    if (group == "trajectories" && action == "run") return trajectories_run(config, out, err);
    if (group == "lines" && action == "trace") return lines_trace(config, out, err);
    if (group == "verify" && action == "all") return verify_all_cmd(config, out);
    err << "unknown command '" << group << " " << action << "'\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace knotlab
