#include "riswt/secrecy_rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riswt {

bool is_feasible(const PowerAllocation& p) {
  return p.p1 >= 0.0 && p.p2 >= 0.0 && p.p1 + p.p2 <= p.pt + 1e-9 * p.pt;
}

SnrCoefficients snr_coefficients(const LinkGains& g, double noise_w) {
  if (!(noise_w > 0.0)) {
    throw std::domain_error("snr_coefficients: noise power must be positive");
  }
  SnrCoefficients c;
  c.mu1 = g.alpha_ab1_sq / noise_w;
  c.mu2 = g.alpha_ab2_sq / noise_w;
  c.beta1 = g.alpha_ae1_sq / noise_w;
  c.beta2 = g.alpha_ae2_sq / noise_w;
  return c;
}

double secrecy_rate(const PowerAllocation& p, const SnrCoefficients& c) {
  const double bob = std::log1p(p.p1 * c.mu1) + std::log1p(p.p2 * c.mu2);
  double eve = 0.0;
  for (Eigen::Index j = 0; j < c.num_eves(); ++j) {
    const double r = std::log1p(p.p1 * c.beta1[j]) + std::log1p(p.p2 * c.beta2[j]);
    eve = j == 0 ? r : std::max(eve, r);
  }
  return bob - eve;
}

double clamped_secrecy_rate(const PowerAllocation& p, const SnrCoefficients& c) {
  return std::max(0.0, secrecy_rate(p, c));
}

double reference_rate_no_ssoc(double pt, const LinkGains& g, double noise_w) {
  const double bob_gain =
      std::pow(std::sqrt(g.alpha_ab1_sq) + std::sqrt(g.alpha_ab2_sq), 2);
  const double bob = std::log1p(pt * bob_gain / noise_w);
  double eve = 0.0;
  for (Eigen::Index j = 0; j < g.alpha_ae1_sq.size(); ++j) {
    const double eve_gain =
        std::pow(std::sqrt(g.alpha_ae1_sq[j]) + std::sqrt(g.alpha_ae2_sq[j]), 2);
    eve = std::max(eve, std::log1p(pt * eve_gain / noise_w));
  }
  return std::max(0.0, bob - eve);
}

double baseline_rate_no_ris(double pt, const LinkGains& g, double noise_w) {
  const double bob = std::log1p(pt * g.alpha_ab1_sq / noise_w);
  double eve = 0.0;
  for (Eigen::Index j = 0; j < g.alpha_ae1_sq.size(); ++j) {
    eve = std::max(eve, std::log1p(pt * g.alpha_ae1_sq[j] / noise_w));
  }
  return std::max(0.0, bob - eve);
}

double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

}  // namespace riswt
