#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "riswt/experiments.hpp"
#include "riswt/rng.hpp"
#include "riswt/secrecy_rate.hpp"

using namespace riswt;

namespace {

Scenario one_eve_scenario() {
  Scenario s;
  s.eves = {Point2(45.0, 20.0)};
  return s;
}

Scenario two_eve_scenario() {
  Scenario s;
  s.eves = {Point2(50.0, 15.0), Point2(55.0, 10.0)};
  return s;
}

}  // namespace

TEST_CASE("percentile rate convention") {
  SUBCASE("enumerated definition on 1..100") {
    std::vector<double> samples;
    for (int i = 1; i <= 100; ++i) samples.push_back(i);

    // definition: the largest value with at least ceil(0.95*100) = 95
    // samples >= it, enumerated over the sample values themselves
    double largest = -1.0;
    for (double cand : samples) {
      int count = 0;
      for (double s : samples) count += s >= cand;
      if (count >= 95) largest = std::max(largest, cand);
    }
    CHECK(largest == 6.0);
    CHECK(percentile_rate(samples) == 6.0);
  }

  SUBCASE("matches the enumerated definition on random samples") {
    auto g = make_engine(7);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + static_cast<int>(uniform01(g) * 40);
      std::vector<double> samples;
      for (int i = 0; i < n; ++i) {
        samples.push_back(std::floor(uniform01(g) * 8.0));  // force ties
      }
      const int needed = static_cast<int>(std::ceil(0.95 * n - 1e-9));
      double largest = std::numeric_limits<double>::lowest();
      for (double cand : samples) {
        int count = 0;
        for (double s : samples) count += s >= cand;
        if (count >= needed) largest = std::max(largest, cand);
      }
      CHECK(percentile_rate(samples) == largest);
    }
  }

  SUBCASE("edges") {
    CHECK(percentile_rate({3.5, 3.5, 3.5}) == 3.5);
    CHECK(percentile_rate({2.25}) == 2.25);
    CHECK(percentile_rate({1.0, 2.0}, 1.0) == 1.0);
    CHECK_THROWS(percentile_rate({}));
    CHECK_THROWS(percentile_rate({1.0}, 0.0));
  }
}

TEST_CASE("eavesdropper distance sweep") {
  const Scenario base = one_eve_scenario();
  const std::vector<double> dv{0.0, 5.0, 10.0, 20.0, 35.0, 50.0};
  const auto rows = sweep_eve_distance(base, dv);
  REQUIRE(rows.size() == dv.size());

  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].sweep_value == dv[i]);
    CHECK(rows[i].rate_ssoc >= 0.0);
    CHECK(rows[i].rate_no_ssoc >= 0.0);
    CHECK(rows[i].rate_ssoc >= rows[i].rate_no_ssoc - 1e-12);
    CHECK(rows[i].rate_ssoc >= rows[i].rate_no_ris - 1e-12);
    CHECK(rows[i].rate_no_ssoc >= rows[i].rate_no_ris - 1e-12);
    CHECK(rows[i].p1 + rows[i].p2 <=
          dbm_to_watts(base.total_power_dbm) * (1.0 + 1e-9));
    if (i > 0) CHECK(rows[i].rate_ssoc >= rows[i - 1].rate_ssoc - 1e-9);
  }

  SUBCASE("rows reproduce their rate through the rate formula") {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Scenario scen = base;
      scen.eves[0] = Point2(45.0, dv[i]);
      const auto c = snr_coefficients(scenario_gains(scen),
                                      dbm_to_watts(scen.noise_power_dbm));
      const PowerAllocation alloc{rows[i].p1, rows[i].p2,
                                  dbm_to_watts(scen.total_power_dbm)};
      CHECK(std::abs(clamped_secrecy_rate(alloc, c) - rows[i].rate_ssoc) <=
            1e-12);
    }
  }

  CHECK_THROWS(sweep_eve_distance(two_eve_scenario(), dv));
}

TEST_CASE("total power sweep") {
  const Scenario base = two_eve_scenario();
  const std::vector<double> pt{0.0, 10.0, 20.0, 30.0, 40.0, 50.0};
  const auto rows = sweep_total_power(base, pt);
  REQUIRE(rows.size() == pt.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].rate_ssoc >= rows[i - 1].rate_ssoc - 1e-9);
    CHECK(rows[i].rate_no_ris >= rows[i - 1].rate_no_ris - 1e-9);
  }

  // direct-only rate saturates at ln(mu1 / worst beta1) for large budgets
  const LinkGains gains = scenario_gains(base);
  REQUIRE(gains.alpha_ab1_sq > gains.alpha_ae1_sq.maxCoeff());
  const double limit =
      std::log(gains.alpha_ab1_sq / gains.alpha_ae1_sq.maxCoeff());
  CHECK(std::abs(rows.back().rate_no_ris - limit) <= 0.05 * limit);

  SUBCASE("dominated channels stay at zero") {
    // both eavesdroppers closer to Alice and to the surface than Bob, so
    // every link is dominated and every scheme clamps to zero
    Scenario hopeless = base;
    hopeless.eves = {Point2(50.0, 5.0), Point2(48.0, 4.0)};
    const auto flat = sweep_total_power(hopeless, pt);
    for (const auto& r : flat) {
      CHECK(r.rate_ssoc == 0.0);
      CHECK(r.rate_no_ssoc == 0.0);
      CHECK(r.rate_no_ris == 0.0);
    }
  }

  CHECK_THROWS(sweep_total_power(one_eve_scenario(), pt));
}

TEST_CASE("eavesdropper count sweep") {
  const Scenario base = one_eve_scenario();
  const Rect region{40.0, 45.0, 30.0, 50.0};
  const std::vector<int> ks{1, 2, 3};
  const auto rows = sweep_num_eves(base, region, ks, 40, 9);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].sweep_value == ks[i]);
    CHECK(rows[i].rate_ssoc >= rows[i].rate_no_ssoc - 1e-12);
    if (i > 0) {
      // nested draws force the summary to be non-increasing in k
      CHECK(rows[i].rate_ssoc <= rows[i - 1].rate_ssoc + 1e-12);
      CHECK(rows[i].rate_no_ssoc <= rows[i - 1].rate_no_ssoc + 1e-12);
    }
  }

  CHECK_THROWS(sweep_num_eves(base, region, std::vector<int>{0, 1}, 10, 1));
  CHECK_THROWS(sweep_num_eves(base, region, std::vector<int>{2, 2}, 10, 1));
  CHECK_THROWS(sweep_num_eves(base, region, std::vector<int>{}, 10, 1));
}

TEST_CASE("csv output") {
  const Scenario base = one_eve_scenario();
  const std::vector<double> dv{0.0, 25.0, 50.0};
  const auto rows = sweep_eve_distance(base, dv);
  const std::string csv = sweep_csv(rows);

  SUBCASE("schema") {
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "sweep_var,scheme,rate_nats,rate_bits,p1_w,p2_w,iters");
    int lines = 0;
    while (std::getline(in, line)) {
      ++lines;
      CHECK(std::count(line.begin(), line.end(), ',') == 6);  // 7 columns
    }
    CHECK(lines == 9);  // three schemes per sweep point
  }

  SUBCASE("byte-identical across runs") {
    const auto again = sweep_csv(sweep_eve_distance(base, dv));
    CHECK(csv == again);

    const Rect region{40.0, 45.0, 30.0, 50.0};
    const std::vector<int> ks{1, 2};
    const auto a = sweep_csv(sweep_num_eves(base, region, ks, 25, 4));
    const auto b = sweep_csv(sweep_num_eves(base, region, ks, 25, 4));
    CHECK(a == b);
  }

  SUBCASE("printed doubles round-trip losslessly") {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::size_t row_idx = 0;
    while (std::getline(in, line)) {
      const std::size_t ssoc = row_idx / 3;
      if (row_idx % 3 == 0) {  // ssoc line
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        CHECK(std::strtod(cell.c_str(), nullptr) == rows[ssoc].sweep_value);
        std::getline(cells, cell, ',');
        CHECK(cell == "ssoc");
        std::getline(cells, cell, ',');
        CHECK(std::strtod(cell.c_str(), nullptr) == rows[ssoc].rate_ssoc);
        std::getline(cells, cell, ',');
        CHECK(std::strtod(cell.c_str(), nullptr) ==
              nats_to_bits(rows[ssoc].rate_ssoc));
        std::getline(cells, cell, ',');
        CHECK(std::strtod(cell.c_str(), nullptr) == rows[ssoc].p1);
        std::getline(cells, cell, ',');
        CHECK(std::strtod(cell.c_str(), nullptr) == rows[ssoc].p2);
      }
      ++row_idx;
    }
  }
}
