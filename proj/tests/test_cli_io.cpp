#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riswt/cli_io.hpp"

using namespace riswt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kScenario = R"({
  "alice": {"x": 0, "y": 0},
  "ris": {"x": 50, "y": 0},
  "bob": {"x": 50, "y": 10},
  "eves": [{"x": 45, "y": 20}],
  "total_power_dbm": 40
})";

RunConfig parse(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"riswt"};
  argv.insert(argv.end(), args.begin(), args.end());
  return parse_config(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("argument parsing") {
  TempDir tmp("riswt_cli_parse");
  write_text(tmp.file("scenario.json"), kScenario);
  const std::string scen = tmp.file("scenario.json");

  SUBCASE("defaults") {
    unsetenv("RISWT_OUT_DIR");
    const auto cfg = parse({"optimize", "--scenario", scen.c_str(), "--seed", "7"});
    CHECK(cfg.command == "optimize");
    CHECK(cfg.scenario_path == scen);
    CHECK(cfg.seed == 7);
    CHECK(cfg.max_iterations == 500);
    CHECK(cfg.tolerance == 1e-9);
    CHECK(cfg.out_dir == "out");
    CHECK_FALSE(cfg.plot);
  }

  SUBCASE("environment default for the output directory") {
    setenv("RISWT_OUT_DIR", "/tmp/riswt_env_out", 1);
    const auto cfg = parse({"optimize", "--scenario", scen.c_str()});
    CHECK(cfg.out_dir == "/tmp/riswt_env_out");
    unsetenv("RISWT_OUT_DIR");
  }

  SUBCASE("file settings merge below flags") {
    write_text(tmp.file("with_opt.json"), R"({
      "eves": [{"x": 45, "y": 20}],
      "optimizer": {"max_iterations": 99, "tolerance": 1e-6}
    })");
    const std::string path = tmp.file("with_opt.json");
    const auto from_file = parse({"optimize", "--scenario", path.c_str()});
    CHECK(from_file.max_iterations == 99);
    CHECK(from_file.tolerance == 1e-6);

    const auto flag_wins =
        parse({"optimize", "--scenario", path.c_str(), "--max-iterations", "40"});
    CHECK(flag_wins.max_iterations == 40);  // flag beats the file
    CHECK(flag_wins.tolerance == 1e-6);     // file still beats the default
  }

  SUBCASE("usage errors") {
    CHECK_THROWS_AS(parse({}), usage_error);
    CHECK_THROWS_AS(parse({"optimise", "--scenario", scen.c_str()}), usage_error);
    CHECK_THROWS_AS(parse({"optimize"}), usage_error);
    CHECK_THROWS_AS(parse({"optimize", "--scenario", "/nonexistent.json"}),
                    usage_error);

    write_text(tmp.file("broken.json"), "{ not json");
    const std::string broken = tmp.file("broken.json");
    CHECK_THROWS_AS(parse({"optimize", "--scenario", broken.c_str()}), usage_error);

    write_text(tmp.file("unknown.json"),
               R"({"eves": [{"x": 1, "y": 1}], "bandwidth": 5})");
    const std::string unknown = tmp.file("unknown.json");
    CHECK_THROWS_AS(parse({"optimize", "--scenario", unknown.c_str()}), usage_error);
  }
}

TEST_CASE("output writing") {
  TempDir tmp("riswt_cli_outputs");
  write_text(tmp.file("scenario.json"), kScenario);

  RunConfig cfg;
  cfg.command = "sweep-distance";
  cfg.scenario_path = tmp.file("scenario.json");
  cfg.out_dir = tmp.file("results");

  const Scenario base = scenario_from_json_file(cfg.scenario_path);
  const std::vector<double> dv{0.0, 25.0, 50.0};
  const auto rows = sweep_eve_distance(base, dv);

  SUBCASE("csv only when plotting is off") {
    const auto written = write_outputs(rows, cfg);
    REQUIRE(written.size() == 1);
    CHECK(written[0] == cfg.out_dir + "/sweep_distance.csv");
    const std::string csv = read_text(written[0]);
    CHECK(csv.rfind("sweep_var,scheme,rate_nats,rate_bits,p1_w,p2_w,iters\n", 0) == 0);

    // byte-identical on a rerun
    const auto again = write_outputs(rows, cfg);
    CHECK(read_text(again[0]) == csv);
  }

  SUBCASE("svg per scheme when plotting is on") {
    cfg.plot = true;
    const auto written = write_outputs(rows, cfg);
    REQUIRE(written.size() == 4);
    for (std::size_t i = 1; i < written.size(); ++i) {
      const std::string svg = read_text(written[i]);
      CHECK(svg.rfind("<svg", 0) == 0);
      CHECK(svg.find("Secrecy rate (bits per channel use)") != std::string::npos);
      CHECK(svg.find("Vertical distance of Eve d_v (m)") != std::string::npos);
      CHECK(svg.find("<polyline") != std::string::npos);
    }
  }

  SUBCASE("empty row set is rejected") {
    CHECK_THROWS(write_outputs(std::vector<SweepResultRow>{}, cfg));
  }
}

TEST_CASE("optimize command end to end") {
  TempDir tmp("riswt_cli_run");
  write_text(tmp.file("scenario.json"), kScenario);

  RunConfig cfg;
  cfg.command = "optimize";
  cfg.scenario_path = tmp.file("scenario.json");
  cfg.out_dir = tmp.file("results");
  CHECK(run(cfg) == 0);
  CHECK(fs::exists(tmp.file("results") + "/optimize.csv"));
  const std::string csv = read_text(tmp.file("results") + "/optimize.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 schemes
}

TEST_CASE("security spec loading") {
  const SecuritySpec spec = security_spec_from_json_text(R"({
    "bob": [[0.95, 0.05], [0.05, 0.95]],
    "eves": [[[0.7, 0.3], [0.3, 0.7]]],
    "input_dist": [0.5, 0.5],
    "rate": 0.1,
    "randomness_rate": 0.35,
    "n_list": [2, 4]
  })");
  CHECK(spec.system.eves.size() == 1);
  CHECK(spec.system.bob.matrix(0, 0) == 0.95);
  CHECK(spec.rate == 0.1);
  CHECK(spec.trials == 20);  // default
  CHECK(spec.n_list == std::vector<int>{2, 4});

  CHECK_THROWS(security_spec_from_json_text(R"({"bob": [[1.0]]})"));
  CHECK_THROWS(security_spec_from_json_text(
      R"({"bob": [[1.0]], "eves": [[[1.0]]], "input_dist": [1.0],
          "rate": 0.1, "randomness_rate": 0.2, "n_list": [2], "extra": 1})"));
}

TEST_CASE("verify-security command end to end") {
  TempDir tmp("riswt_cli_security");
  write_text(tmp.file("channels.json"), R"({
    "bob": [[0.95, 0.05], [0.05, 0.95]],
    "eves": [[[0.7, 0.3], [0.3, 0.7]]],
    "input_dist": [0.5, 0.5],
    "rate": 0.1,
    "randomness_rate": 0.35,
    "n_list": [2, 4, 6],
    "trials": 3
  })");

  RunConfig cfg;
  cfg.command = "verify-security";
  cfg.scenario_path = tmp.file("channels.json");
  cfg.out_dir = tmp.file("results");
  cfg.seed = 3;
  CHECK(run(cfg) == 0);

  const std::string decay = read_text(tmp.file("results") + "/decay.csv");
  CHECK(decay.rfind("n,trial,tv_max,p_err_joint,p_err_msg\n", 0) == 0);
  CHECK(std::count(decay.begin(), decay.end(), '\n') == 10);  // 3 n x 3 trials

  const std::string summary = read_text(tmp.file("results") + "/decay_summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);
  CHECK(fs::exists(tmp.file("results") + "/slopes.json"));

  SUBCASE("unknown spec keys are rejected at parse time") {
    write_text(tmp.file("bad.json"), R"({
      "bob": [[1.0, 0.0], [0.0, 1.0]],
      "eves": [],
      "input_dist": [0.5, 0.5],
      "rate": 0.1,
      "randomness_rate": 0.35,
      "n_list": [2],
      "snr": 10
    })");
    const std::string bad = tmp.file("bad.json");
    CHECK_THROWS_AS(parse({"verify-security", "--scenario", bad.c_str()}),
                    usage_error);
  }
}

#ifdef RISWT_CLI_PATH
TEST_CASE("binary exit codes") {
  TempDir tmp("riswt_cli_binary");
  write_text(tmp.file("scenario.json"), kScenario);

  auto exit_code = [](const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
  };

  CHECK(exit_code(RISWT_CLI_PATH) == 2);  // no arguments: usage
  CHECK(exit_code(std::string(RISWT_CLI_PATH) + " bogus-command") == 2);
  CHECK(exit_code(std::string(RISWT_CLI_PATH) +
                  " optimize --scenario /does/not/exist.json") == 2);
  CHECK(exit_code(std::string(RISWT_CLI_PATH) + " optimize --scenario " +
                  tmp.file("scenario.json") + " --out " + tmp.file("o")) == 0);
}
#endif
