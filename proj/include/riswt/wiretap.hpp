#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "riswt/types.hpp"

namespace riswt {

// Exact enumeration is refused beyond this many product-alphabet states;
// the Monte Carlo estimators below cover the large-n regime.
inline constexpr std::int64_t kEnumerationBudget = 10'000'000;

struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite channel: rows are inputs, each row a probability vector.
struct DiscreteChannel {
  Mat matrix;

  int input_size() const { return static_cast<int>(matrix.rows()); }
  int output_size() const { return static_cast<int>(matrix.cols()); }
};

DiscreteChannel make_channel(Mat matrix);
DiscreteChannel binary_symmetric_channel(double flip);

struct DiscreteWiretapSystem {
  DiscreteChannel bob;
  std::vector<DiscreteChannel> eves;
  Vec input_dist;
};

void validate(const DiscreteWiretapSystem& sys);

// Randomized wiretap encoder: `messages` x `randomness` codewords of length n
// over the input alphabet. Row m*randomness + w holds codeword (m, w).
struct Codebook {
  int n = 0;
  int messages = 0;    // L
  int randomness = 0;  // L1
  CodewordMat words;

  double rate() const;             // ln(L)/n
  double randomness_rate() const;  // ln(L1)/n

  std::span<const int> word(int m, int w) const {
    return {words.row(static_cast<Eigen::Index>(m) * randomness + w).data(),
            static_cast<std::size_t>(n)};
  }
};

// ---- distributions ----

// q_z = qx^T * matrix.
Vec output_marginal(const DiscreteChannel& ch, const Vec& qx);

// n-fold product distribution q^(x)n over sequences; sequence (z_0..z_{n-1})
// maps to index sum_i z_i * |Z|^(n-1-i).
Vec iid_product(const Vec& q, int n, std::int64_t budget = kEnumerationBudget);

// Output distribution of message m under uniform randomness:
// (1/L1) * sum_w K^(x)n(. | x^n(m, w)), over the full product alphabet.
Vec message_output_distribution(const Codebook& cb, int m,
                                const DiscreteChannel& ch,
                                std::int64_t budget = kEnumerationBudget);

// Joint distribution of (x, z), flattened x-major.
Vec joint_distribution(const DiscreteChannel& ch, const Vec& qx);
// Outer product of two distributions, flattened a-major.
Vec product_distribution(const Vec& a, const Vec& b);

// ---- information measures ----

// Half the L1 distance; equals the sup-over-events form on finite spaces.
double tv_distance(const Vec& p, const Vec& q);

// Same distance written as E_q[(p/q - 1)^+]; requires q > 0 wherever p > 0.
double tv_positive_part(const Vec& p, const Vec& q);

// sum_i ln(K(z_i|x_i)/Q_Z(z_i)); -inf when some K(z_i|x_i) = 0.
double information_density(const DiscreteChannel& ch, const Vec& qx,
                           std::span<const int> x_seq,
                           std::span<const int> z_seq);

double mutual_information(const DiscreteChannel& ch, const Vec& qx);

// (1/(alpha-1)) * ln sum p^alpha q^(1-alpha) for alpha in (0,1) or (1,inf).
// Terms with p = 0 contribute nothing; q = 0 against p > 0 gives +inf for
// alpha > 1.
double renyi_divergence(const Vec& p, const Vec& q, double alpha);

// P((1/n) sum_k i_k > I + eps) for n i.i.d. per-letter densities, computed
// exactly by enumerating (x, z) pair multiplicities with multinomial weights.
double atypical_probability(const DiscreteChannel& ch, const Vec& qx,
                            double eps, int n,
                            std::int64_t budget = kEnumerationBudget);

// ---- security of a concrete codebook ----

// max over message pairs of TV between their induced output distributions.
double distinguishing_advantage(const Codebook& cb, const DiscreteChannel& ch,
                                std::int64_t budget = kEnumerationBudget);

// Sandwich [adv_ds/2, adv_ds] bounding the semantic-security advantage.
std::pair<double, double> semantic_advantage_interval(double adv_ds);

Codebook random_codebook(const Vec& qx, int n, int messages, int randomness,
                         std::uint64_t seed);

// Joint typicality decoder: the unique (m, w) whose density is finite and
// at least n*(I[X;Y] - eps); the first pair (0, 0) when there is no unique
// match.
std::pair<int, int> typicality_decode(std::span<const int> y_seq,
                                      const Codebook& cb,
                                      const DiscreteChannel& ch_bob,
                                      const Vec& qx, double eps);

struct DecodingErrors {
  double message = 0.0;  // P(decoded message != m)
  double joint = 0.0;    // P(decoded pair != (m, w)); always >= message
};

// Exact error probabilities, averaged over uniform (m, w) and the full
// output sequence space.
DecodingErrors average_errors(const Codebook& cb,
                              const DiscreteChannel& ch_bob, const Vec& qx,
                              double eps,
                              std::int64_t budget = kEnumerationBudget);

// exp(-2 * eps^2 * L1): concentration of the codebook TV around its mean.
double mcdiarmid_rhs(double eps, std::int64_t l1);

// Upper bounds on the admissible decay exponents, alpha > 1. An infinite
// divergence is reported as a zero admissible exponent.
struct ExponentPredictions {
  Arr eve_atypical;              // per eavesdropper
  double bob_atypical = 0.0;     // no-typical-codeword error event
  double bob_collision = 0.0;    // multiple-typical-codewords error event
};

ExponentPredictions exponent_predictions(const DiscreteWiretapSystem& sys,
                                         double alpha, double eps, double R,
                                         double R1);

// ---- experiments ----

struct DecayTrialRow {
  int n = 0;
  int trial = 0;
  double tv_max = 0.0;       // worst message (and eavesdropper) TV to Q_Z^n
  double p_err_joint = 0.0;
  double p_err_msg = 0.0;
};

struct DecaySummaryRow {
  int n = 0;
  double mean_tv_max = 0.0;
  double mean_p_err_joint = 0.0;
  double mean_p_err_msg = 0.0;
  bool skipped = false;  // enumeration budget exceeded at this n
};

struct DecayResult {
  std::vector<DecayTrialRow> trials;
  std::vector<DecaySummaryRow> summary;
  bool rate_condition_ok = true;  // R1 > max_j I[X;Z_j] and R + R1 < I[X;Y]
};

// Draws `trials` random codebooks per block length, sized L = round(e^{nR}),
// L1 = round(e^{nR1}) (at least 1 each), and records the exact worst-message
// TV and decoding errors. Decoder epsilon defaults to 0.1 * I[X;Y].
DecayResult security_decay_experiment(const DiscreteWiretapSystem& sys,
                                      double R, double R1,
                                      std::span<const int> n_list, int trials,
                                      std::uint64_t seed,
                                      std::int64_t budget = kEnumerationBudget);

// Least-squares slope of ln(y) against x; every y must be positive.
double fit_log_slope(std::span<const double> x, std::span<const double> y);

// ---- Monte Carlo fallbacks for budgets the exact routines refuse ----

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct McErrors {
  McEstimate message;
  McEstimate joint;
};

McErrors mc_average_errors(const Codebook& cb, const DiscreteChannel& ch_bob,
                           const Vec& qx, double eps, int trials,
                           std::uint64_t seed);

// TV(P_m1, P_m2) estimated as E_{P_m2}[(P_m1/P_m2 - 1)^+] with pointwise
// codebook-mixture evaluations; the advantage is the max over pairs.
McEstimate mc_distinguishing_advantage(const Codebook& cb,
                                       const DiscreteChannel& ch,
                                       int trials_per_pair,
                                       std::uint64_t seed);

// ---- aggregate report ----

struct EveSecurity {
  Vec per_message_tv;  // TV(P_{Z^n|m}, Q_Z^n) for every message
  double adv_ds = 0.0;
  std::pair<double, double> adv_ss_interval{0.0, 0.0};
};

struct SecurityReport {
  std::vector<EveSecurity> eves;
  double p_err_message = 0.0;
  double p_err_joint = 0.0;
  ExponentPredictions exponents;
};

SecurityReport security_report(const DiscreteWiretapSystem& sys,
                               const Codebook& cb, double eps_decode,
                               double alpha, double eps_typ,
                               std::int64_t budget = kEnumerationBudget);

}  // namespace riswt
