#pragma once

#include "riswt/channel_model.hpp"
#include "riswt/types.hpp"

namespace riswt {

// Per-watt SNR slopes: mu for Bob's two links, beta1/beta2 per eavesdropper.
struct SnrCoefficients {
  double mu1 = 0.0;
  double mu2 = 0.0;
  Arr beta1;
  Arr beta2;

  Eigen::Index num_eves() const { return beta1.size(); }
};

// Split (P1, P2) of the total budget Pt, all in watts.
struct PowerAllocation {
  double p1 = 0.0;
  double p2 = 0.0;
  double pt = 0.0;
};

// p1, p2 >= 0 and p1 + p2 <= pt within 1e-9 * pt.
bool is_feasible(const PowerAllocation& p);

SnrCoefficients snr_coefficients(const LinkGains& g, double noise_w);

// ln(1+P1*mu1) + ln(1+P2*mu2) - max_j [ln(1+P1*beta_j1) + ln(1+P2*beta_j2)],
// in nats per channel use. May be negative.
double secrecy_rate(const PowerAllocation& p, const SnrCoefficients& c);

double clamped_secrecy_rate(const PowerAllocation& p, const SnrCoefficients& c);

// Conventional scheme without separate streams: one stream over the
// amplitude-coherent combination of the two links, full budget. Clamped.
double reference_rate_no_ssoc(double pt, const LinkGains& g, double noise_w);

// Direct link only, full budget. Clamped.
double baseline_rate_no_ris(double pt, const LinkGains& g, double noise_w);

double nats_to_bits(double nats);

}  // namespace riswt
