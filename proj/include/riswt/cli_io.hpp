#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "riswt/experiments.hpp"
#include "riswt/wiretap.hpp"

namespace riswt {

// Decay-experiment input: the channels, the rate pair and the schedule.
struct SecuritySpec {
  DiscreteWiretapSystem system;
  double rate = 0.0;
  double randomness_rate = 0.0;
  std::vector<int> n_list;
  int trials = 20;
};

// Strict parsing; unknown keys are rejected.
SecuritySpec security_spec_from_json_text(const std::string& text);
SecuritySpec security_spec_from_json_file(const std::string& path);

// Command-line or configuration mistakes; the CLI exits with code 2 on these.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;  // optimize | sweep-distance | sweep-power |
                        // sweep-eves | verify-security
  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int max_iterations = 500;
  double tolerance = 1e-9;
  bool plot = false;
};

// Merges flags > scenario-file settings > defaults. Throws usage_error on an
// unknown command, missing scenario file, malformed JSON or unknown keys.
// The default out_dir honors the RISWT_OUT_DIR environment variable.
RunConfig parse_config(int argc, const char* const* argv);

std::string usage_text();

// Writes <command>.csv into cfg.out_dir, plus one SVG line chart per scheme
// when plotting is enabled. Returns the written paths.
std::vector<std::string> write_outputs(std::span<const SweepResultRow> rows,
                                       const RunConfig& cfg);

// Executes the configured command. Returns the process exit code.
int run(const RunConfig& cfg);

// Minimal static line chart (rate in bits over the sweep variable).
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           std::span<const double> xs,
                           std::span<const double> ys);

}  // namespace riswt
