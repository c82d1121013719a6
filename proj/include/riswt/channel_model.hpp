#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "riswt/types.hpp"

namespace riswt {

// Planar deployment of one transmitter, one reflecting surface, one legitimate
// receiver and d >= 1 eavesdroppers. Distances in meters, powers in dBm,
// gains in dB.
struct Scenario {
  Point2 alice{0.0, 0.0};
  Point2 ris{50.0, 0.0};
  Point2 bob{50.0, 10.0};
  std::vector<Point2> eves;
  double wavelength_m = 0.01;
  double antenna_gain_db = 5.0;
  double ris_gain_db = 30.0;  // aggregate reflection gain of the surface
  double noise_power_dbm = -104.0;
  double total_power_dbm = 40.0;
};

// Linear power gains |alpha|^2 of the four link types.
struct LinkGains {
  double alpha_ab1_sq = 0.0;  // Alice -> Bob, direct
  double alpha_ab2_sq = 0.0;  // Alice -> RIS -> Bob cascade
  Arr alpha_ae1_sq;           // per eavesdropper, direct
  Arr alpha_ae2_sq;           // per eavesdropper, cascade
};

struct Rect {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
};

double db_to_linear(double db);
double dbm_to_watts(double dbm);

// Free-space path loss 20*log10(4*pi*d/lambda) in dB.
double path_loss_db(double distance_m, double wavelength_m);

// Link budget: 10^((sum(gains_db) - pl_db)/10).
double link_gain_linear(double pl_db, std::span<const double> gains_db);

// Applies the budget to every link of the scenario. The cascade link uses the
// sum of both hop losses plus the aggregate surface gain.
LinkGains scenario_gains(const Scenario& s);

// `count` uniform points in the rectangle, reproducible from the seed.
std::vector<Point2> random_eve_region(const Rect& rect, int count,
                                      std::uint64_t seed);

// Strict JSON loading: unknown keys are rejected. An optional "optimizer"
// object is tolerated here and consumed by the CLI layer.
Scenario scenario_from_json_text(const std::string& text);
Scenario scenario_from_json_file(const std::string& path);

void validate(const Scenario& s);

}  // namespace riswt
