#include "riswt/channel_model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "riswt/rng.hpp"

namespace riswt {

namespace {

double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double path_loss_db(double distance_m, double wavelength_m) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("path_loss_db: distance must be positive");
  }
  if (!(wavelength_m > 0.0)) {
    throw std::domain_error("path_loss_db: wavelength must be positive");
  }
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m / wavelength_m);
}

double link_gain_linear(double pl_db, std::span<const double> gains_db) {
  double budget_db = -pl_db;
  for (double g : gains_db) budget_db += g;
  return db_to_linear(budget_db);
}

void validate(const Scenario& s) {
  if (!(s.wavelength_m > 0.0)) {
    throw std::domain_error("scenario: wavelength must be positive");
  }
  if (s.eves.empty()) {
    throw std::domain_error("scenario: at least one eavesdropper required");
  }
  auto finite = [](const Point2& p) {
    return std::isfinite(p.x()) && std::isfinite(p.y());
  };
  if (!finite(s.alice) || !finite(s.ris) || !finite(s.bob)) {
    throw std::domain_error("scenario: positions must be finite");
  }
  for (const Point2& e : s.eves) {
    if (!finite(e)) throw std::domain_error("scenario: positions must be finite");
  }
}

LinkGains scenario_gains(const Scenario& s) {
  validate(s);
  const double g_ant = s.antenna_gain_db;
  const double lam = s.wavelength_m;

  auto direct = [&](const Point2& from, const Point2& to) {
    const double gains[] = {g_ant, g_ant};
    return link_gain_linear(path_loss_db(distance(from, to), lam), gains);
  };
  auto cascade = [&](const Point2& from, const Point2& to) {
    const double pl = path_loss_db(distance(from, s.ris), lam) +
                      path_loss_db(distance(s.ris, to), lam);
    const double gains[] = {g_ant, g_ant, s.ris_gain_db};
    return link_gain_linear(pl, gains);
  };

  LinkGains g;
  g.alpha_ab1_sq = direct(s.alice, s.bob);
  g.alpha_ab2_sq = cascade(s.alice, s.bob);
  const auto d = static_cast<Eigen::Index>(s.eves.size());
  g.alpha_ae1_sq.resize(d);
  g.alpha_ae2_sq.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    g.alpha_ae1_sq[j] = direct(s.alice, s.eves[j]);
    g.alpha_ae2_sq[j] = cascade(s.alice, s.eves[j]);
  }
  return g;
}

std::vector<Point2> random_eve_region(const Rect& rect, int count,
                                      std::uint64_t seed) {
  if (!(rect.x_min < rect.x_max) || !(rect.y_min < rect.y_max)) {
    throw std::domain_error("random_eve_region: empty region");
  }
  if (count < 1) {
    throw std::domain_error("random_eve_region: count must be >= 1");
  }
  auto g = make_engine(seed);
  std::vector<Point2> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double x = rect.x_min + (rect.x_max - rect.x_min) * uniform01(g);
    const double y = rect.y_min + (rect.y_max - rect.y_min) * uniform01(g);
    points.emplace_back(x, y);
  }
  return points;
}

namespace {

using nlohmann::json;

Point2 point_from_json(const json& j, const std::string& what) {
  if (!j.is_object()) {
    throw std::runtime_error("scenario: " + what + " must be an object");
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "x" && key != "y") {
      throw std::runtime_error("scenario: unknown key '" + key + "' in " + what);
    }
  }
  if (!j.contains("x") || !j.contains("y")) {
    throw std::runtime_error("scenario: " + what + " needs fields x and y");
  }
  return {j.at("x").get<double>(), j.at("y").get<double>()};
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
  json j = json::parse(text);
  static const char* known[] = {
      "alice",         "ris",         "bob",
      "eves",          "wavelength_m", "antenna_gain_db",
      "ris_gain_db",   "noise_power_dbm", "total_power_dbm",
      "optimizer",
  };
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::runtime_error("scenario: unknown key '" + key + "'");
  }

  Scenario s;
  if (j.contains("alice")) s.alice = point_from_json(j.at("alice"), "alice");
  if (j.contains("ris")) s.ris = point_from_json(j.at("ris"), "ris");
  if (j.contains("bob")) s.bob = point_from_json(j.at("bob"), "bob");
  if (j.contains("eves")) {
    s.eves.clear();
    for (const auto& e : j.at("eves")) {
      s.eves.push_back(point_from_json(e, "eves entry"));
    }
  }
  if (j.contains("wavelength_m")) s.wavelength_m = j.at("wavelength_m");
  if (j.contains("antenna_gain_db")) s.antenna_gain_db = j.at("antenna_gain_db");
  if (j.contains("ris_gain_db")) s.ris_gain_db = j.at("ris_gain_db");
  if (j.contains("noise_power_dbm")) s.noise_power_dbm = j.at("noise_power_dbm");
  if (j.contains("total_power_dbm")) s.total_power_dbm = j.at("total_power_dbm");
  if (j.contains("optimizer")) {
    const json& opt = j.at("optimizer");
    for (const auto& [key, _] : opt.items()) {
      if (key != "max_iterations" && key != "tolerance") {
        throw std::runtime_error("scenario: unknown optimizer key '" + key + "'");
      }
    }
  }
  validate(s);
  return s;
}

Scenario scenario_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

}  // namespace riswt
