// knotlab command-line tool.
//
//   knotlab <group> <action> [options]
//
// Options override keys from --config; both go through the same validation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "knotlab/cli.hpp"
#include "knotlab/config.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> values;  // key, raw text
};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Registers the shared options on one subcommand. Values are stored as text
// and handed to the config resolver, so CLI and file use one parser.
void add_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "key = value run configuration file");
  const auto text_opt = [cmd, &ov](const std::string& flag, const std::string& key,
                                   const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&ov, key](const std::string& v) { ov.values.emplace_back(key, v); }, help);
  };
  text_opt("--seed", "seed", "seed for all random sampling");
  text_opt("--threads", "threads", "worker threads (never changes outputs)");
  text_opt("--g", "g", "dimensionless coupling");
  text_opt("--energy-joules", "energy_joules", "knot energy in J (with --l0-meters)");
  text_opt("--l0-meters", "l0_meters", "knot size L0 in m (with --energy-joules)");
  text_opt("--paper-figure", "paper_figure", "ensemble preset: 2, 3 or 4");
  text_opt("--variant", "field.variant", "field variant: standard or plus_z2");
  text_opt("--point", "sample.point", "single event X,Y,Z,T");
  text_opt("--t-start", "t_start", "integration start time");
  text_opt("--t-end", "t_end", "integration end time");
  text_opt("--rel-tol", "integrator.rel_tol", "relative tolerance");
  text_opt("--abs-tol", "integrator.abs_tol", "absolute tolerance");
  text_opt("--max-step", "integrator.max_step", "largest integrator step");
  text_opt("--bounds-min", "export.min", "grid lower corner X,Y,Z");
  text_opt("--bounds-max", "export.max", "grid upper corner X,Y,Z");
  text_opt("--resolution", "export.resolution", "grid points per axis NX,NY,NZ");
  text_opt("--line-points", "lines.points", "resampled points per field line");
  cmd->add_option_function<std::vector<std::string>>(
         "--T", [&ov](const std::vector<std::string>& v) { ov.values.emplace_back("times", join(v, ",")); },
         "evaluation time(s); repeatable")
      ->allow_extra_args(false);
  cmd->add_option_function<std::vector<std::string>>(
         "--start",
         [&ov](const std::vector<std::string>& v) { ov.values.emplace_back("lines.starts", join(v, ";")); },
         "field-line start kind:X,Y,Z; repeatable")
      ->allow_extra_args(false);
  cmd->add_option_function<std::string>(
      "--out", [&ov](const std::string& v) { ov.values.emplace_back("output.dir", v); },
      "output directory (default $KNOTLAB_OUTPUT_DIR or .)");
}

knotlab::RunConfig build_config(const Overrides& ov) {
  knotlab::ConfigDocument doc;
  if (!ov.config_path.empty()) {
    std::ifstream f(ov.config_path);
    if (!f) throw knotlab::Error("cannot read config file " + ov.config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    doc = knotlab::parse_document(ss.str());
  }
  if (!doc.count("output.dir")) {
    if (const char* env = std::getenv("KNOTLAB_OUTPUT_DIR"); env && *env) {
      doc["output.dir"] = {env, 0};
    }
  }
  for (const auto& [key, value] : ov.values) doc[key] = {value, 0};
  return knotlab::resolve_config(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electromagnetic knot fields, diagnostics, particle pushing and topology"};
  app.set_version_flag("--version", std::string(knotlab::kToolVersion));
  app.require_subcommand(1);

  struct Command {
    std::string group, action, help;
  };
  const std::vector<Command> commands{
      {"fields", "sample", "evaluate fields at a point or on a grid"},
      {"energy", "report", "energy, momentum, size and helicity diagnostics"},
      {"trajectories", "run", "push the 60-electron ensemble"},
      {"lines", "trace", "trace field lines and compute linking numbers"},
      {"verify", "all", "run every self-consistency check"},
  };

  Overrides ov;
  std::string group, action;
  for (const auto& c : commands) {
    CLI::App* g = app.get_subcommand_no_throw(c.group);
    if (!g) {
      g = app.add_subcommand(c.group, c.group + " commands");
      g->require_subcommand(1);
    }
    CLI::App* a = g->add_subcommand(c.action, c.help);
    add_options(a, ov);
    a->callback([&group, &action, c] {
      group = c.group;
      action = c.action;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  knotlab::RunConfig config;
  try {
    config = build_config(ov);
  } catch (const knotlab::ConfigError& e) {
    std::cerr << "config error";
    if (!e.key().empty()) std::cerr << " [" << e.key() << "]";
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return knotlab::dispatch(group, action, config, std::cout, std::cerr);
}
