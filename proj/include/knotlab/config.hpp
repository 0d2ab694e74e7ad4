#pragma once

/// Run configuration: a flat key-value document with dotted namespaces.
///
///   # comment
///   g = 1
///   t_end: 1.5
///   integrator.rel_tol = 1e-9
///
/// Either `=` or `:` separates key and value. Unknown keys, duplicate keys and
/// malformed values are rejected with the offending line and key.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "knotlab/errors.hpp"
#include "knotlab/knot_fields.hpp"
#include "knotlab/quadrature.hpp"
#include "knotlab/topology.hpp"

namespace knotlab {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key, int line)
      : Error(what), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }  ///< 0 when not tied to a document line

 private:
  std::string key_;
  int line_;
};

struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// Raw key -> value map, before validation.
using ConfigDocument = std::map<std::string, ConfigEntry>;

struct LineStart {
  FieldKind kind = FieldKind::magnetic;
  Vec3 position;
};

struct RunConfig {
  std::optional<double> g;
  std::optional<double> energy_joules;
  std::optional<double> l0_meters;
  std::optional<int> paper_figure;

  double t_start = 0.0;
  double t_end = 1.5;
  std::vector<double> times{0.0};

  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.05;
  double output_stride = 0.01;
  FieldVariant variant = FieldVariant::standard;

  GridSpec grid;

  Vec3 bounds_min{-2.0, -2.0, -2.0};
  Vec3 bounds_max{2.0, 2.0, 2.0};
  std::array<int, 3> resolution{41, 41, 41};
  std::optional<SpacetimePoint> point;

  std::vector<LineStart> line_starts{{FieldKind::magnetic, {0.3, 0.0, 0.0}},
                                     {FieldKind::magnetic, {0.6, 0.0, 0.0}},
                                     {FieldKind::electric, {0.0, 0.5, 0.0}}};
  int line_points = 2000;

  double fd_step = kDefaultFdStep;
  std::uint64_t seed = 42;
  std::string output_dir = ".";
  unsigned threads = 1;

  /// g taken from `g`, from the physical units, or from the figure preset.
  double resolved_g() const;

  /// Resolved configuration as JSON. `threads` is omitted: it never changes
  /// any result.
  nlohmann::json to_json() const;
};

/// Splits the document into entries. Throws ConfigError on syntax errors and
/// duplicate keys.
ConfigDocument parse_document(std::string_view text);

/// Validates keys and values, fills defaults. Throws ConfigError naming the
/// key (and line) that violates a constraint.
RunConfig resolve_config(const ConfigDocument& doc);

RunConfig parse_config(std::string_view text);

std::string_view to_string(FieldVariant variant);

}  // namespace knotlab
