#pragma once

/// Subcommand dispatch and the deterministic text formats written by the CLI.
///
/// Every file starts with a provenance header: CSV files with `#` comment
/// lines, JSON files with a top-level "meta" object. Neither contains the
/// thread count or output directory, so outputs are byte-identical across
/// repeated runs and parallelism settings.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "knotlab/config.hpp"
#include "knotlab/diagnostics.hpp"
#include "knotlab/particle_dynamics.hpp"
#include "knotlab/verification.hpp"

namespace knotlab {

inline constexpr const char* kToolName = "knotlab";
inline constexpr const char* kToolVersion = "1.0.0";

/// 9 significant digits, round-half-even ("%.9g"); "nan"/"inf" spelled out.
std::string format_number(double v);

/// v rounded to 9 significant digits (NaN/inf unchanged).
double round9(double v);

/// JSON value with every number rounded to 9 significant digits.
nlohmann::json round_numbers(const nlohmann::json& j);

std::string csv_header_comment(const RunConfig& config, const std::string& command);
nlohmann::json meta_json(const RunConfig& config, const std::string& command);

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows);
void write_trajectories_csv(std::ostream& os, const EnsembleResult& ensemble);
void write_lines_csv(std::ostream& os, const std::vector<FieldLine>& lines);
nlohmann::json reports_json(const std::vector<CheckReport>& reports);
nlohmann::json ensemble_json(const EnsembleResult& ensemble, const PushConfig& push);
nlohmann::json energy_report_json(const EnergyReport& report);

/// Runs `<group> <action>` ("fields sample", "energy report",
/// "trajectories run", "lines trace", "verify all"). Files go to
/// config.output_dir; a short summary goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 when a requested check fails, 2 on errors.
int dispatch(const std::string& group, const std::string& action, const RunConfig& config,
             std::ostream& out, std::ostream& err);

}  // namespace knotlab
