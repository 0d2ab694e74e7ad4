#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "knotlab/cli.hpp"

using namespace knotlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("knotlab_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run(const std::string& group, const std::string& action, const std::string& config_text,
        std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = dispatch(group, action, parse_config(config_text), out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream is(csv);
  for (std::string l; std::getline(is, l);) {
    if (!l.empty() && l[0] != '#') lines.push_back(l);
  }
  return lines;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(-1.5e-20) == "-1.5e-20");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(round9(1.0 / 3.0) == 0.333333333);
  const auto j = round_numbers({{"a", 2.0 / 3.0}, {"b", {1.0 / 7.0, 3}}, {"c", "text"}});
  CHECK(j["a"] == 0.666666667);
  CHECK(j["b"][0] == 0.142857143);
  CHECK(j["b"][1] == 3);
  CHECK(j["c"] == "text");
}

TEST_CASE("fields sample on a 2x2x2 grid") {
  const fs::path dir = fresh_dir("grid");
  REQUIRE(run("fields", "sample",
              "output.dir = " + dir.string() +
                  "\ntimes = 1.5\nexport.min = -1,-1,-1\nexport.max = 1,1,1\nexport.resolution = 2,2,2\n") == 0);
  const auto lines = data_lines(slurp(dir / "fields_T1.5.csv"));
  REQUIRE(lines.size() == 9);
  CHECK(lines[0] == "X,Y,Z,U,Bx,By,Bz,Ex,Ey,Ez");
  CHECK(lines[1].rfind("-1,-1,-1,", 0) == 0);
}

TEST_CASE("fields sample at a point") {
  const fs::path dir = fresh_dir("point");
  std::string out;
  REQUIRE(run("fields", "sample", "output.dir = " + dir.string() + "\nsample.point = 0,0,0,0\n", &out) == 0);
  CHECK(out.find("U=1.62113894") != std::string::npos);  // 16/pi^2
  CHECK(out.find("b=(0, 0, -4)") != std::string::npos);
  const auto lines = data_lines(slurp(dir / "fields_point.csv"));
  REQUIRE(lines.size() == 2);
}

TEST_CASE("energy report at T=0") {
  const fs::path dir = fresh_dir("energy");
  REQUIRE(run("energy", "report", "output.dir = " + dir.string() + "\ntimes = 0\n") == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "energy_report.json"));
  CHECK(j["meta"]["command"] == "energy report");
  CHECK(std::abs(j["reports"][0]["total_energy"].get<double>() - 2.0) < 1e-6);
  CHECK(std::abs(j["helicities_t0"]["total"].get<double>() - 1.0) < 2e-5);
  CHECK(data_lines(slurp(dir / "energy_report.csv")).size() == 2);
}

TEST_CASE("trajectories run with a figure preset") {
  const fs::path dir = fresh_dir("traj");
  REQUIRE(run("trajectories", "run", "output.dir = " + dir.string() + "\npaper_figure = 2\n") == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "ensemble.json"));
  CHECK(j["g"] == 1.0);
  CHECK(j["t_end"] == 1.5);
  CHECK(j["particles"].size() == 60);
  const auto lines = data_lines(slurp(dir / "trajectories.csv"));
  CHECK(lines[0] == "particle_id,T,X,Y,Z,VX,VY,VZ,speed");
  CHECK(lines.size() == 1 + 60 * 151);
}

TEST_CASE("lines trace writes polylines and linking numbers") {
  const fs::path dir = fresh_dir("lines");
  REQUIRE(run("lines", "trace", "output.dir = " + dir.string() + "\nlines.points = 400\n") == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "linking.json"));
  REQUIRE(j["linking"].size() == 3);
  CHECK(j["linking"][0]["rounded"] == 1);
  const auto lines = data_lines(slurp(dir / "lines.csv"));
  CHECK(lines[0] == "line_id,idx,X,Y,Z");
  CHECK(lines.size() == 1 + 3 * 401);
}

TEST_CASE("verify all is byte-identical across runs and thread counts") {
  const fs::path a = fresh_dir("verify_a");
  const fs::path b = fresh_dir("verify_b");
  REQUIRE(run("verify", "all", "output.dir = " + a.string() + "\nthreads = 1\n") == 0);
  REQUIRE(run("verify", "all", "output.dir = " + b.string() + "\nthreads = 4\n") == 0);
  CHECK(slurp(a / "verify_report.json") == slurp(b / "verify_report.json"));
  CHECK(slurp(a / "verify_report.json").size() > 100);
}

TEST_CASE("unknown commands and runtime errors return 2") {
  CHECK(run("fields", "paint", "") == 2);
  const fs::path dir = fresh_dir("bad");
  // An open electric line cannot be linked: reported as a failed check.
  CHECK(run("lines", "trace",
            "output.dir = " + dir.string() + "\nlines.points = 50\nlines.starts = electric:0.5,0,0; magnetic:0.3,0,0\n") == 1);
}
