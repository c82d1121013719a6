#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riswt/channel_model.hpp"
#include "riswt/rng.hpp"

using namespace riswt;

TEST_CASE("free space path loss") {
  CHECK(path_loss_db(50.0, 0.01) == doctest::Approx(95.9636).epsilon(1e-6));
  CHECK(path_loss_db(100.0, 0.01) == doctest::Approx(101.9843).epsilon(1e-6));
  // argument of the log10 equals one
  const double lambda = 0.7;
  CHECK(path_loss_db(lambda / (4.0 * std::numbers::pi), lambda) ==
        doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(path_loss_db(0.0, 0.01), std::domain_error);
  CHECK_THROWS_AS(path_loss_db(-1.0, 0.01), std::domain_error);
  CHECK_THROWS_AS(path_loss_db(1.0, 0.0), std::domain_error);
}

TEST_CASE("path loss monotone in distance and wavelength") {
  auto g = make_engine(11);
  for (int i = 0; i < 200; ++i) {
    const double d = 0.1 + 500.0 * uniform01(g);
    const double lam = 0.001 + 0.2 * uniform01(g);
    const double bump = 0.01 + uniform01(g);
    CHECK(path_loss_db(d + bump, lam) > path_loss_db(d, lam));
    CHECK(path_loss_db(d, lam + 0.01 * bump) < path_loss_db(d, lam));
  }
}

TEST_CASE("link budget composition") {
  CHECK(link_gain_linear(0.0, {}) == doctest::Approx(1.0));
  const double gains[] = {5.0, 5.0};
  CHECK(link_gain_linear(95.9636, gains) ==
        doctest::Approx(2.5330e-9).epsilon(1e-4));
  const double cancel[] = {10.0};
  CHECK(link_gain_linear(10.0, cancel) == doctest::Approx(1.0).epsilon(1e-12));
}

namespace {

Scenario default_scenario() {
  Scenario s;
  s.eves = {Point2(45.0, 20.0)};
  return s;
}

}  // namespace

TEST_CASE("scenario gains match the direct formula") {
  Scenario s = default_scenario();
  const LinkGains g = scenario_gains(s);

  // Alice (0,0) to Bob (50,10): recompute from scratch.
  const double dist = std::sqrt(2600.0);
  const double pl = 20.0 * std::log10(4.0 * std::numbers::pi * dist / 0.01);
  CHECK(pl == doctest::Approx(96.1339).epsilon(1e-6));
  const double expected = std::pow(10.0, (10.0 - pl) / 10.0);
  CHECK(g.alpha_ab1_sq == doctest::Approx(expected).epsilon(1e-12));
  CHECK(g.alpha_ab1_sq == doctest::Approx(2.4356e-9).epsilon(1e-4));

  // cascade budget: both hops plus the surface gain
  const double pl_cascade =
      20.0 * std::log10(4.0 * std::numbers::pi * 50.0 / 0.01) +
      20.0 * std::log10(4.0 * std::numbers::pi * 10.0 / 0.01);
  const double expected_cascade =
      std::pow(10.0, (10.0 + s.ris_gain_db - pl_cascade) / 10.0);
  CHECK(g.alpha_ab2_sq == doctest::Approx(expected_cascade).epsilon(1e-12));

  CHECK(g.alpha_ae1_sq.size() == 1);
  CHECK((g.alpha_ae1_sq > 0.0).all());
  CHECK((g.alpha_ae2_sq > 0.0).all());
}

TEST_CASE("disabled cascade and coincident geometry") {
  Scenario s = default_scenario();
  s.ris_gain_db = -std::numeric_limits<double>::infinity();
  CHECK(scenario_gains(s).alpha_ab2_sq == 0.0);

  // an eavesdropper at Bob's exact position sees Bob's gains
  Scenario twin = default_scenario();
  twin.eves = {twin.bob};
  const LinkGains g = scenario_gains(twin);
  CHECK(g.alpha_ae1_sq[0] == doctest::Approx(g.alpha_ab1_sq).epsilon(1e-15));
  CHECK(g.alpha_ae2_sq[0] == doctest::Approx(g.alpha_ab2_sq).epsilon(1e-15));

  Scenario bad = default_scenario();
  bad.bob = bad.alice;  // zero distance
  CHECK_THROWS_AS(scenario_gains(bad), std::domain_error);
}

TEST_CASE("scenario gains are translation invariant") {
  Scenario s = default_scenario();
  s.eves.push_back(Point2(55.0, 10.0));
  const LinkGains g0 = scenario_gains(s);

  const Point2 shift(-17.5, 42.0);
  Scenario t = s;
  t.alice += shift;
  t.ris += shift;
  t.bob += shift;
  for (auto& e : t.eves) e += shift;
  const LinkGains g1 = scenario_gains(t);

  CHECK(g1.alpha_ab1_sq == doctest::Approx(g0.alpha_ab1_sq).epsilon(1e-12));
  CHECK(g1.alpha_ab2_sq == doctest::Approx(g0.alpha_ab2_sq).epsilon(1e-12));
  for (Eigen::Index j = 0; j < 2; ++j) {
    CHECK(g1.alpha_ae1_sq[j] == doctest::Approx(g0.alpha_ae1_sq[j]).epsilon(1e-12));
    CHECK(g1.alpha_ae2_sq[j] == doctest::Approx(g0.alpha_ae2_sq[j]).epsilon(1e-12));
  }
}

TEST_CASE("cascade below direct when longer and surface gain non-positive") {
  auto g = make_engine(23);
  for (int i = 0; i < 50; ++i) {
    Scenario s = default_scenario();
    s.ris_gain_db = -10.0 * uniform01(g);
    s.ris = Point2(20.0 + 30.0 * uniform01(g), 15.0 + 10.0 * uniform01(g));
    const LinkGains lg = scenario_gains(s);
    const double direct_len = (s.alice - s.bob).norm();
    const double cascade_len =
        (s.alice - s.ris).norm() + (s.ris - s.bob).norm();
    REQUIRE(cascade_len > direct_len);
    CHECK(lg.alpha_ab2_sq <= lg.alpha_ab1_sq);
  }
}

TEST_CASE("random eavesdropper placement") {
  const Rect rect{40.0, 45.0, 30.0, 50.0};
  const auto a = random_eve_region(rect, 25, 99);
  const auto b = random_eve_region(rect, 25, 99);
  REQUIRE(a.size() == 25);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);  // deterministic given the seed
    CHECK(a[i].x() >= rect.x_min);
    CHECK(a[i].x() <= rect.x_max);
    CHECK(a[i].y() >= rect.y_min);
    CHECK(a[i].y() <= rect.y_max);
  }

  // law of large numbers on the sample mean
  const Rect wide{40.0, 45.0, 30.0, 50.0};
  const auto many = random_eve_region(wide, 100000, 7);
  double mx = 0.0, my = 0.0;
  for (const auto& p : many) {
    mx += p.x();
    my += p.y();
  }
  mx /= static_cast<double>(many.size());
  my /= static_cast<double>(many.size());
  CHECK(std::abs(mx - 42.5) < 0.05);
  CHECK(std::abs(my - 40.0) < 0.2);

  CHECK_THROWS_AS(random_eve_region({1.0, 1.0, 0.0, 2.0}, 3, 1), std::domain_error);
  CHECK_THROWS_AS(random_eve_region(rect, 0, 1), std::domain_error);
}

TEST_CASE("scenario json round trip and strictness") {
  const std::string text = R"({
    "alice": {"x": 0, "y": 0},
    "ris": {"x": 50, "y": 0},
    "bob": {"x": 50, "y": 10},
    "eves": [{"x": 45, "y": 20}],
    "wavelength_m": 0.01,
    "antenna_gain_db": 5,
    "ris_gain_db": 30,
    "noise_power_dbm": -104,
    "total_power_dbm": 40
  })";
  const Scenario s = scenario_from_json_text(text);
  CHECK(s.bob == Point2(50.0, 10.0));
  CHECK(s.eves.size() == 1);
  CHECK(s.noise_power_dbm == -104.0);

  CHECK_THROWS(scenario_from_json_text(R"({"eves": [{"x":1,"y":1}], "frequency": 3e9})"));
  CHECK_THROWS(scenario_from_json_text(R"({"eves": [{"x":1,"y":1,"z":0}]})"));
  CHECK_THROWS(scenario_from_json_text(R"({"eves": []})"));
  CHECK_THROWS(scenario_from_json_text("not json"));
}
