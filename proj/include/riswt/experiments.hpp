#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "riswt/channel_model.hpp"
#include "riswt/mm_kkt.hpp"

namespace riswt {

// One sweep point with the clamped rate of each scheme in nats. The power
// split and iteration count describe the SSOC optimizer run; they are zero
// for the aggregated eavesdropper-count sweep.
struct SweepResultRow {
  double sweep_value = 0.0;
  double rate_ssoc = 0.0;
  double rate_no_ssoc = 0.0;
  double rate_no_ris = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  int iterations = 0;
};

// Moves the single eavesdropper over (45, d_v) for each grid value.
std::vector<SweepResultRow> sweep_eve_distance(const Scenario& base,
                                               std::span<const double> dv_grid,
                                               const OptimizerConfig& cfg = {});

// Varies the total budget (dBm) with the two-eavesdropper geometry fixed.
std::vector<SweepResultRow> sweep_total_power(
    const Scenario& base, std::span<const double> pt_grid_dbm,
    const OptimizerConfig& cfg = {});

// For each k draws `trials` eavesdropper sets from the region and summarizes
// the per-draw rates with the 95% rule. Draws are nested: the k+1 set of a
// trial extends its k set, so the summary is monotone in k by construction.
std::vector<SweepResultRow> sweep_num_eves(const Scenario& base,
                                           const Rect& region,
                                           std::span<const int> k_list,
                                           int trials, std::uint64_t seed,
                                           const OptimizerConfig& cfg = {});

// The largest value such that at least ceil(level*N) samples are >= it:
// the ascending order statistic at zero-based index floor((1-level)*N).
double percentile_rate(std::vector<double> samples, double level = 0.95);

// Long-format CSV, one line per (sweep point, scheme), 17 significant digits.
// Header: sweep_var,scheme,rate_nats,rate_bits,p1_w,p2_w,iters
std::string sweep_csv(std::span<const SweepResultRow> rows);

}  // namespace riswt
