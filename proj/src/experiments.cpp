#include "riswt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "riswt/rng.hpp"
#include "riswt/secrecy_rate.hpp"

namespace riswt {

namespace {

struct SchemeRates {
  double ssoc = 0.0;
  double no_ssoc = 0.0;
  double no_ris = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  int iterations = 0;
};

SchemeRates evaluate_schemes(const Scenario& scen, const OptimizerConfig& cfg) {
  const LinkGains gains = scenario_gains(scen);
  const double noise_w = dbm_to_watts(scen.noise_power_dbm);
  const double pt = dbm_to_watts(scen.total_power_dbm);
  const SnrCoefficients c = snr_coefficients(gains, noise_w);

  const auto [alloc, trace] = optimize(c, pt, cfg);
  SchemeRates r;
  r.ssoc = clamped_secrecy_rate(alloc, c);
  r.no_ssoc = reference_rate_no_ssoc(pt, gains, noise_w);
  r.no_ris = baseline_rate_no_ris(pt, gains, noise_w);
  r.p1 = alloc.p1;
  r.p2 = alloc.p2;
  r.iterations = static_cast<int>(trace.size());
  return r;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<SweepResultRow> sweep_eve_distance(const Scenario& base,
                                               std::span<const double> dv_grid,
                                               const OptimizerConfig& cfg) {
  if (base.eves.size() != 1) {
    throw std::invalid_argument("sweep_eve_distance: base needs exactly one eavesdropper");
  }
  std::vector<SweepResultRow> rows;
  rows.reserve(dv_grid.size());
  Scenario scen = base;
  for (double dv : dv_grid) {
    scen.eves[0] = Point2(45.0, dv);
    const SchemeRates r = evaluate_schemes(scen, cfg);
    rows.push_back({dv, r.ssoc, r.no_ssoc, r.no_ris, r.p1, r.p2, r.iterations});
  }
  return rows;
}

std::vector<SweepResultRow> sweep_total_power(
    const Scenario& base, std::span<const double> pt_grid_dbm,
    const OptimizerConfig& cfg) {
  if (base.eves.size() != 2) {
    throw std::invalid_argument("sweep_total_power: base needs exactly two eavesdroppers");
  }
  std::vector<SweepResultRow> rows;
  rows.reserve(pt_grid_dbm.size());
  Scenario scen = base;
  for (double pt_dbm : pt_grid_dbm) {
    scen.total_power_dbm = pt_dbm;
    const SchemeRates r = evaluate_schemes(scen, cfg);
    rows.push_back(
        {pt_dbm, r.ssoc, r.no_ssoc, r.no_ris, r.p1, r.p2, r.iterations});
  }
  return rows;
}

std::vector<SweepResultRow> sweep_num_eves(const Scenario& base,
                                           const Rect& region,
                                           std::span<const int> k_list,
                                           int trials, std::uint64_t seed,
                                           const OptimizerConfig& cfg) {
  if (k_list.empty()) {
    throw std::invalid_argument("sweep_num_eves: empty k list");
  }
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] < 1) {
      throw std::invalid_argument("sweep_num_eves: k must be >= 1");
    }
    if (i > 0 && k_list[i] <= k_list[i - 1]) {
      throw std::invalid_argument("sweep_num_eves: k list must be ascending");
    }
  }
  if (trials < 1) {
    throw std::invalid_argument("sweep_num_eves: trials must be >= 1");
  }

  const int k_max = k_list.back();
  std::vector<std::vector<double>> ssoc(k_list.size()), no_ssoc(k_list.size()),
      no_ris(k_list.size());

  Scenario scen = base;
  for (int t = 0; t < trials; ++t) {
    // One nested draw per trial: the k-eavesdropper set is a prefix of the
    // (k+1)-set, so per-draw rates are non-increasing in k.
    const auto points =
        random_eve_region(region, k_max, mix_seed(seed, static_cast<std::uint64_t>(t)));
    for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
      scen.eves.assign(points.begin(), points.begin() + k_list[ki]);
      const SchemeRates r = evaluate_schemes(scen, cfg);
      ssoc[ki].push_back(r.ssoc);
      no_ssoc[ki].push_back(r.no_ssoc);
      no_ris[ki].push_back(r.no_ris);
    }
  }

  std::vector<SweepResultRow> rows;
  rows.reserve(k_list.size());
  for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
    SweepResultRow row;
    row.sweep_value = static_cast<double>(k_list[ki]);
    row.rate_ssoc = percentile_rate(ssoc[ki]);
    row.rate_no_ssoc = percentile_rate(no_ssoc[ki]);
    row.rate_no_ris = percentile_rate(no_ris[ki]);
    rows.push_back(row);
  }
  return rows;
}

double percentile_rate(std::vector<double> samples, double level) {
  if (samples.empty()) {
    throw std::invalid_argument("percentile_rate: empty sample set");
  }
  if (!(level > 0.0 && level <= 1.0)) {
    throw std::invalid_argument("percentile_rate: level must lie in (0, 1]");
  }
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
  // Largest value with at least ceil(level*n) samples >= it; the small slack
  // keeps exact integer products from landing on the wrong side of ceil.
  const auto needed = static_cast<std::ptrdiff_t>(
      std::ceil(level * static_cast<double>(n) - 1e-9));
  const auto index = std::clamp<std::ptrdiff_t>(n - needed, 0, n - 1);
  std::nth_element(samples.begin(), samples.begin() + index, samples.end());
  return samples[static_cast<std::size_t>(index)];
}

std::string sweep_csv(std::span<const SweepResultRow> rows) {
  std::string out = "sweep_var,scheme,rate_nats,rate_bits,p1_w,p2_w,iters\n";
  auto line = [&out](double var, const char* scheme, double nats, double p1,
                     double p2, int iters) {
    out += fmt17(var);
    out += ',';
    out += scheme;
    out += ',';
    out += fmt17(nats);
    out += ',';
    out += fmt17(nats_to_bits(nats));
    out += ',';
    out += fmt17(p1);
    out += ',';
    out += fmt17(p2);
    out += ',';
    out += std::to_string(iters);
    out += '\n';
  };
  for (const auto& r : rows) {
    line(r.sweep_value, "ssoc", r.rate_ssoc, r.p1, r.p2, r.iterations);
    line(r.sweep_value, "no_ssoc", r.rate_no_ssoc, 0.0, 0.0, 0);
    line(r.sweep_value, "no_ris", r.rate_no_ris, 0.0, 0.0, 0);
  }
  return out;
}

}  // namespace riswt
