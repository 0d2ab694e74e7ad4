#include "knotlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "knotlab/particle_dynamics.hpp"

namespace knotlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (;;) {
    const auto pos = s.find(sep, begin);
    out.push_back(trim(s.substr(begin, pos == std::string_view::npos ? pos : pos - begin)));
    if (pos == std::string_view::npos) break;
    begin = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& key, const ConfigEntry& e, const std::string& why) {
  throw ConfigError("config line " + std::to_string(e.line) + ", key '" + key + "': " + why, key,
                    e.line);
}

double to_double(const std::string& key, const ConfigEntry& e, std::string_view text) {
  double v = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    fail(key, e, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const ConfigEntry& e, std::string_view text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(key, e, "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> to_list(const std::string& key, const ConfigEntry& e, std::string_view text,
                            std::size_t expected = 0) {
  std::vector<double> out;
  for (const auto part : split(text, ',')) out.push_back(to_double(key, e, part));
  if (expected != 0 && out.size() != expected) {
    fail(key, e, "expected " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

Vec3 to_vec3(const std::string& key, const ConfigEntry& e, std::string_view text) {
  const auto v = to_list(key, e, text, 3);
  return {v[0], v[1], v[2]};
}

double positive(const std::string& key, const ConfigEntry& e, double v) {
  if (!(v > 0.0)) fail(key, e, "must be > 0");
  return v;
}

FieldKind to_kind(const std::string& key, const ConfigEntry& e, std::string_view text) {
  if (text == "magnetic") return FieldKind::magnetic;
  if (text == "electric") return FieldKind::electric;
  fail(key, e, "field kind must be 'magnetic' or 'electric'");
}

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

}  // namespace

std::string_view to_string(FieldVariant variant) {
  return variant == FieldVariant::standard ? "standard" : "plus_z2";
}

ConfigDocument parse_document(std::string_view text) {
  ConfigDocument doc;
  int line_no = 0;
  for (const auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'", "",
                        line_no);
    }
    const std::string key(trim(line.substr(0, sep)));
    const std::string value(trim(line.substr(sep + 1)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key", "", line_no);
    }
    if (value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ", key '" + key + "': empty value",
                        key, line_no);
    }
    if (doc.contains(key)) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'",
                        key, line_no);
    }
    doc[key] = {value, line_no};
  }
  return doc;
}

RunConfig resolve_config(const ConfigDocument& doc) {
  RunConfig c;
  using Setter = std::function<void(const std::string&, const ConfigEntry&)>;
  const std::map<std::string, Setter> setters = {
      {"g",
       [&](const auto& k, const auto& e) {
         const double g = to_double(k, e, e.value);
         if (g < 0.0) fail(k, e, "must be >= 0");
         c.g = g;
       }},
      {"energy_joules",
       [&](const auto& k, const auto& e) { c.energy_joules = positive(k, e, to_double(k, e, e.value)); }},
      {"l0_meters",
       [&](const auto& k, const auto& e) { c.l0_meters = positive(k, e, to_double(k, e, e.value)); }},
      {"paper_figure",
       [&](const auto& k, const auto& e) {
         const auto fig = to_integer(k, e, e.value);
         if (fig < 2 || fig > 4) fail(k, e, "preset must be 2, 3 or 4");
         c.paper_figure = static_cast<int>(fig);
       }},
      {"t_start", [&](const auto& k, const auto& e) { c.t_start = to_double(k, e, e.value); }},
      {"t_end", [&](const auto& k, const auto& e) { c.t_end = to_double(k, e, e.value); }},
      {"times", [&](const auto& k, const auto& e) { c.times = to_list(k, e, e.value); }},
      {"seed",
       [&](const auto& k, const auto& e) {
         const auto s = to_integer(k, e, e.value);
         if (s < 0) fail(k, e, "must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"threads",
       [&](const auto& k, const auto& e) {
         const auto n = to_integer(k, e, e.value);
         if (n < 1 || n > 1024) fail(k, e, "must be in [1, 1024]");
         c.threads = static_cast<unsigned>(n);
       }},
      {"integrator.rel_tol",
       [&](const auto& k, const auto& e) { c.rel_tol = positive(k, e, to_double(k, e, e.value)); }},
      {"integrator.abs_tol",
       [&](const auto& k, const auto& e) { c.abs_tol = positive(k, e, to_double(k, e, e.value)); }},
      {"integrator.max_step",
       [&](const auto& k, const auto& e) { c.max_step = positive(k, e, to_double(k, e, e.value)); }},
      {"integrator.output_stride",
       [&](const auto& k, const auto& e) { c.output_stride = to_double(k, e, e.value); }},
      {"field.variant",
       [&](const auto& k, const auto& e) {
         if (e.value == "standard") {
           c.variant = FieldVariant::standard;
         } else if (e.value == "plus_z2") {
           c.variant = FieldVariant::plus_z2;
         } else {
           fail(k, e, "must be 'standard' or 'plus_z2'");
         }
       }},
      {"grid.radial_nodes",
       [&](const auto& k, const auto& e) { c.grid.radial_nodes = static_cast<int>(to_integer(k, e, e.value)); }},
      {"grid.theta_nodes",
       [&](const auto& k, const auto& e) {
         c.grid.angular_nodes_theta = static_cast<int>(to_integer(k, e, e.value));
       }},
      {"grid.phi_nodes",
       [&](const auto& k, const auto& e) {
         c.grid.angular_nodes_phi = static_cast<int>(to_integer(k, e, e.value));
       }},
      {"grid.radial_scale",
       [&](const auto& k, const auto& e) { c.grid.radial_map_scale = to_double(k, e, e.value); }},
      {"export.min", [&](const auto& k, const auto& e) { c.bounds_min = to_vec3(k, e, e.value); }},
      {"export.max", [&](const auto& k, const auto& e) { c.bounds_max = to_vec3(k, e, e.value); }},
      {"export.resolution",
       [&](const auto& k, const auto& e) {
         const auto parts = split(e.value, ',');
         if (parts.size() != 3) fail(k, e, "expected three integers");
         for (std::size_t i = 0; i < 3; ++i) {
           const auto n = to_integer(k, e, parts[i]);
           if (n < 2 || n > 4096) fail(k, e, "each resolution must be in [2, 4096]");
           c.resolution[i] = static_cast<int>(n);
         }
       }},
      {"sample.point",
       [&](const auto& k, const auto& e) {
         const auto v = to_list(k, e, e.value, 4);
         c.point = SpacetimePoint{{v[0], v[1], v[2]}, v[3]};
       }},
      {"lines.starts",
       [&](const auto& k, const auto& e) {
         c.line_starts.clear();
         for (const auto item : split(e.value, ';')) {
           const auto colon = item.find(':');
           if (colon == std::string_view::npos) fail(k, e, "expected 'kind:x,y,z' entries");
           c.line_starts.push_back(
               {to_kind(k, e, trim(item.substr(0, colon))), to_vec3(k, e, item.substr(colon + 1))});
         }
       }},
      {"lines.points",
       [&](const auto& k, const auto& e) {
         const auto n = to_integer(k, e, e.value);
         if (n < 3) fail(k, e, "must be >= 3");
         c.line_points = static_cast<int>(n);
       }},
      {"verify.fd_step",
       [&](const auto& k, const auto& e) { c.fd_step = positive(k, e, to_double(k, e, e.value)); }},
      {"output.dir", [&](const auto&, const auto& e) { c.output_dir = e.value; }},
  };

  for (const auto& [key, entry] : doc) {
    const auto it = setters.find(key);
    if (it == setters.end()) fail(key, entry, "unknown key");
    it->second(key, entry);
  }

  auto line_of = [&](const std::string& key) {
    const auto it = doc.find(key);
    return it == doc.end() ? 0 : it->second.line;
  };
  auto violation = [&](const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "': " + why, key, line_of(key));
  };

  const bool physical = c.energy_joules.has_value() || c.l0_meters.has_value();
  if (c.g && physical) violation("g", "g and energy_joules/l0_meters are mutually exclusive");
  if (physical && !(c.energy_joules && c.l0_meters)) {
    violation(c.energy_joules ? "l0_meters" : "energy_joules",
              "energy_joules and l0_meters must be given together");
  }
  if (c.paper_figure && (c.g || physical)) {
    violation("paper_figure", "a figure preset fixes g; do not also give g or physical units");
  }
  if (!(c.t_end > c.t_start)) violation("t_end", "must exceed t_start");
  if (c.times.empty()) violation("times", "needs at least one value");
  try {
    c.grid.validate();
  } catch (const InvalidArgumentError& e) {
    violation("grid", e.what());
  }
  for (int i = 0; i < 3; ++i) {
    if (!(c.bounds_max[i] > c.bounds_min[i])) violation("export.max", "must exceed export.min");
  }
  return c;
}

RunConfig parse_config(std::string_view text) { return resolve_config(parse_document(text)); }

double RunConfig::resolved_g() const {
  if (g) return *g;
  if (energy_joules && l0_meters) return prefactor_g(*energy_joules, *l0_meters);
  if (paper_figure) {
    switch (*paper_figure) {
      case 2: return 1.0;
      case 3: return 10.0;
      case 4: return 100.0;
      default: break;
    }
  }
  return 1.0;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["g"] = resolved_g();
  if (energy_joules) j["energy_joules"] = *energy_joules;
  if (l0_meters) j["l0_meters"] = *l0_meters;
  if (paper_figure) j["paper_figure"] = *paper_figure;
  j["t_start"] = t_start;
  j["t_end"] = t_end;
  j["times"] = times;
  j["integrator"] = {{"rel_tol", rel_tol},
                     {"abs_tol", abs_tol},
                     {"max_step", max_step},
                     {"output_stride", output_stride}};
  j["field"] = {{"variant", std::string(to_string(variant))}};
  j["grid"] = {{"radial_nodes", grid.radial_nodes},
               {"theta_nodes", grid.angular_nodes_theta},
               {"phi_nodes", grid.angular_nodes_phi},
               {"radial_scale", grid.radial_map_scale}};
  j["export"] = {{"min", vec_json(bounds_min)},
                 {"max", vec_json(bounds_max)},
                 {"resolution", resolution}};
  if (point) {
    j["sample"] = {{"point", {point->position.x, point->position.y, point->position.z, point->t}}};
  }
  nlohmann::json starts = nlohmann::json::array();
  for (const auto& s : line_starts) {
    starts.push_back({{"kind", std::string(to_string(s.kind))}, {"position", vec_json(s.position)}});
  }
  j["lines"] = {{"starts", starts}, {"points", line_points}};
  j["verify"] = {{"fd_step", fd_step}};
  j["seed"] = seed;
  return j;
}

}  // namespace knotlab
