#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "riswt/secrecy_rate.hpp"

namespace riswt {

// Fixed pair (P1, P2) the tangent minorizer is built around.
struct SurrogateAnchor {
  double p1 = 0.0;
  double p2 = 0.0;
};

enum class KktCase {
  interior,        // budget constraint inactive, lambda = 0
  budget_active,   // P1 + P2 = Pt, lambda > 0
  corner_p1_zero,  // on the P1 = 0 axis
  corner_p2_zero,  // on the P2 = 0 axis
  origin,
};

const char* to_string(KktCase c);

struct KktCandidate {
  double p1 = 0.0;
  double p2 = 0.0;
  std::optional<double> lambda;  // absent for interior/corner candidates
  KktCase tag = KktCase::origin;
};

struct OptimizerConfig {
  int max_iterations = 500;
  double tolerance = 1e-9;        // stop when the rate changes less than this
  double grid_resolution = 1e-3;  // used by the verification oracle only
};

struct IterationRecord {
  SurrogateAnchor anchor;
  KktCandidate chosen;
  double surrogate = 0.0;  // surrogate value at the chosen point
  double rate = 0.0;       // raw secrecy rate at the chosen point
};

using OptimizerTrace = std::vector<IterationRecord>;

// First-order minorizer of ln(1+beta*p) around `anchor`:
// ln(1+beta*anchor) + beta*(p-anchor)/(1+beta*anchor).
double tangent_line(double beta, double anchor, double p);

// Concave surrogate of the secrecy rate: Bob's terms kept, each
// eavesdropper's log replaced by its tangent, the max over eavesdroppers
// re-evaluated at (p1, p2).
double surrogate_value(double p1, double p2, const SurrogateAnchor& anchor,
                       const SnrCoefficients& c);

// Stationary point of the surrogate with the budget constraint inactive.
// Absent when a slope is degenerate or the point is infeasible.
std::optional<KktCandidate> solve_case1(const SurrogateAnchor& anchor,
                                        const SnrCoefficients& c, double pt);

// Budget-active stationary points: roots of the quadratic in P1 obtained by
// eliminating the multiplier, filtered by feasibility and lambda >= 0.
std::vector<KktCandidate> solve_case2(const SurrogateAnchor& anchor,
                                      const SnrCoefficients& c, double pt);

// Case 1, case 2 and the boundary/corner candidates. Never empty.
std::vector<KktCandidate> kkt_candidates(const SurrogateAnchor& anchor,
                                         const SnrCoefficients& c, double pt);

// One minorize-maximize step: the candidate with the largest surrogate value
// (ties to larger p1, then larger p2). Falls back to the anchor itself when
// no candidate improves on it, which preserves the ascent property.
std::pair<SurrogateAnchor, double> mm_step(const SurrogateAnchor& anchor,
                                           const SnrCoefficients& c, double pt);

// Iterated MM from `start` (default (pt/2, pt/2)) until the raw rate change
// drops below the tolerance or max_iterations is reached.
std::pair<PowerAllocation, OptimizerTrace> optimize(
    const SnrCoefficients& c, double pt, const OptimizerConfig& cfg = {},
    std::optional<SurrogateAnchor> start = std::nullopt);

// Exhaustive search of the raw secrecy rate over the simplex grid
// {(i*r*pt, j*r*pt) : i + j <= 1/r}. Independent check of the optimizer.
std::pair<PowerAllocation, double> grid_oracle(const SnrCoefficients& c,
                                               double pt, double resolution);

}  // namespace riswt
