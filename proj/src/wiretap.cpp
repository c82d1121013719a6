#include "riswt/wiretap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "riswt/rng.hpp"

namespace riswt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRowSumTol = 1e-12;

void check_distribution(const Vec& p, const char* what, double tol = 1e-9) {
  if (p.size() == 0) {
    throw std::invalid_argument(std::string(what) + ": empty distribution");
  }
  if ((p.array() < 0.0).any()) {
    throw std::invalid_argument(std::string(what) + ": negative entry");
  }
  if (std::abs(p.sum() - 1.0) > tol) {
    throw std::invalid_argument(std::string(what) + ": not normalized");
  }
}

// |base|^exp with the enumeration budget enforced.
std::int64_t checked_states(int base, int exp, std::int64_t budget) {
  std::int64_t s = 1;
  for (int i = 0; i < exp; ++i) {
    if (s > budget / base) {
      throw budget_exceeded(
          "product alphabet exceeds the enumeration budget; "
          "use the Monte Carlo estimators");
    }
    s *= base;
  }
  if (s > budget) {
    throw budget_exceeded(
        "product alphabet exceeds the enumeration budget; "
        "use the Monte Carlo estimators");
  }
  return s;
}

// Advances a base-`radix` odometer; returns false after the last state.
bool next_state(std::vector<int>& digits, int radix) {
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
    if (++digits[i] < radix) return true;
    digits[i] = 0;
  }
  return false;
}

void check_codebook(const Codebook& cb, const DiscreteChannel& ch) {
  if (cb.messages < 1 || cb.randomness < 1 || cb.n < 1) {
    throw std::invalid_argument("codebook: L, L1 and n must be >= 1");
  }
  if (cb.words.rows() !=
          static_cast<Eigen::Index>(cb.messages) * cb.randomness ||
      cb.words.cols() != cb.n) {
    throw std::invalid_argument("codebook: word array shape mismatch");
  }
  if ((cb.words.array() < 0).any() ||
      (cb.words.array() >= ch.input_size()).any()) {
    throw std::invalid_argument("codebook: symbol outside the input alphabet");
  }
}

// Shared typicality classifier: a pair is a decoding candidate when its
// density is finite and at least n*(I - eps). The lower threshold is what
// rejects unrelated codewords (their densities concentrate far below I); a
// set bounded above only would accept every impostor and the decoder could
// never be unique for L*L1 >= 2.
struct Decoder {
  Mat log_ratio;        // (x, y) -> ln(K(y|x)/Q_Y(y)), -inf on zero mass
  double threshold_lo;  // n * (I[X;Y] - eps)

  Decoder(const DiscreteChannel& ch, const Vec& qx, double eps, int n) {
    const Vec qy = output_marginal(ch, qx);
    log_ratio.resize(ch.input_size(), ch.output_size());
    for (int x = 0; x < ch.input_size(); ++x) {
      for (int y = 0; y < ch.output_size(); ++y) {
        log_ratio(x, y) =
            ch.matrix(x, y) > 0.0 ? std::log(ch.matrix(x, y) / qy[y]) : -kInf;
      }
    }
    threshold_lo = n * (mutual_information(ch, qx) - eps);
  }

  bool typical(std::span<const int> x_seq, std::span<const int> y_seq) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < x_seq.size(); ++i) {
      const double r = log_ratio(x_seq[i], y_seq[i]);
      if (r == -kInf) return false;
      sum += r;
    }
    return sum >= threshold_lo;
  }

  std::pair<int, int> decode(const Codebook& cb,
                             std::span<const int> y_seq) const {
    int hits = 0;
    std::pair<int, int> found{0, 0};
    for (int m = 0; m < cb.messages && hits < 2; ++m) {
      for (int w = 0; w < cb.randomness && hits < 2; ++w) {
        if (typical(cb.word(m, w), y_seq)) {
          ++hits;
          found = {m, w};
        }
      }
    }
    return hits == 1 ? found : std::pair<int, int>{0, 0};
  }
};

double sequence_probability(const DiscreteChannel& ch,
                            std::span<const int> x_seq,
                            std::span<const int> y_seq) {
  double p = 1.0;
  for (std::size_t i = 0; i < x_seq.size(); ++i) {
    p *= ch.matrix(x_seq[i], y_seq[i]);
  }
  return p;
}

int sample_symbol(const Vec& cdf, double u) {
  const auto it = std::upper_bound(cdf.data(), cdf.data() + cdf.size(), u);
  const auto idx = static_cast<int>(it - cdf.data());
  return std::min(idx, static_cast<int>(cdf.size()) - 1);
}

Vec cumulative(const Vec& p) {
  Vec cdf(p.size());
  std::partial_sum(p.data(), p.data() + p.size(), cdf.data());
  return cdf;
}

}  // namespace

DiscreteChannel make_channel(Mat matrix) {
  if (matrix.rows() < 1 || matrix.cols() < 1) {
    throw std::invalid_argument("channel: matrix must be non-empty");
  }
  if ((matrix.array() < 0.0).any() || (matrix.array() > 1.0).any()) {
    throw std::invalid_argument("channel: entries must lie in [0, 1]");
  }
  for (Eigen::Index x = 0; x < matrix.rows(); ++x) {
    if (std::abs(matrix.row(x).sum() - 1.0) > kRowSumTol) {
      throw std::invalid_argument("channel: row " + std::to_string(x) +
                                  " does not sum to 1");
    }
  }
  return DiscreteChannel{std::move(matrix)};
}

DiscreteChannel binary_symmetric_channel(double flip) {
  if (!(flip >= 0.0) || !(flip <= 1.0)) {
    throw std::invalid_argument("bsc: flip probability must lie in [0, 1]");
  }
  Mat m(2, 2);
  m << 1.0 - flip, flip, flip, 1.0 - flip;
  return DiscreteChannel{std::move(m)};
}

void validate(const DiscreteWiretapSystem& sys) {
  check_distribution(sys.input_dist, "system input distribution", kRowSumTol);
  if (sys.bob.input_size() != sys.input_dist.size()) {
    throw std::invalid_argument("system: Bob channel input size mismatch");
  }
  for (const auto& eve : sys.eves) {
    if (eve.input_size() != sys.input_dist.size()) {
      throw std::invalid_argument("system: Eve channel input size mismatch");
    }
  }
}

double Codebook::rate() const {
  return std::log(static_cast<double>(messages)) / n;
}

double Codebook::randomness_rate() const {
  return std::log(static_cast<double>(randomness)) / n;
}

Vec output_marginal(const DiscreteChannel& ch, const Vec& qx) {
  if (qx.size() != ch.input_size()) {
    throw std::invalid_argument("output_marginal: dimension mismatch");
  }
  check_distribution(qx, "output_marginal input");
  return ch.matrix.transpose() * qx;
}

Vec iid_product(const Vec& q, int n, std::int64_t budget) {
  if (n < 1) throw std::invalid_argument("iid_product: n must be >= 1");
  const int m = static_cast<int>(q.size());
  checked_states(m, n, budget);
  Vec cur(1);
  cur << 1.0;
  for (int i = 0; i < n; ++i) {
    Vec next(cur.size() * m);
    for (Eigen::Index s = 0; s < cur.size(); ++s) {
      for (int z = 0; z < m; ++z) next[s * m + z] = cur[s] * q[z];
    }
    cur.swap(next);
  }
  return cur;
}

Vec message_output_distribution(const Codebook& cb, int m,
                                const DiscreteChannel& ch,
                                std::int64_t budget) {
  check_codebook(cb, ch);
  if (m < 0 || m >= cb.messages) {
    throw std::invalid_argument("message index out of range");
  }
  const int out = ch.output_size();
  const std::int64_t states = checked_states(out, cb.n, budget);
  Vec acc = Vec::Zero(states);
  for (int w = 0; w < cb.randomness; ++w) {
    const auto seq = cb.word(m, w);
    Vec cur(1);
    cur << 1.0;
    for (int i = 0; i < cb.n; ++i) {
      Vec next(cur.size() * out);
      for (Eigen::Index s = 0; s < cur.size(); ++s) {
        for (int z = 0; z < out; ++z) {
          next[s * out + z] = cur[s] * ch.matrix(seq[i], z);
        }
      }
      cur.swap(next);
    }
    acc += cur;
  }
  return acc / static_cast<double>(cb.randomness);
}

Vec joint_distribution(const DiscreteChannel& ch, const Vec& qx) {
  if (qx.size() != ch.input_size()) {
    throw std::invalid_argument("joint_distribution: dimension mismatch");
  }
  Vec joint(ch.input_size() * ch.output_size());
  for (int x = 0; x < ch.input_size(); ++x) {
    for (int z = 0; z < ch.output_size(); ++z) {
      joint[x * ch.output_size() + z] = qx[x] * ch.matrix(x, z);
    }
  }
  return joint;
}

Vec product_distribution(const Vec& a, const Vec& b) {
  Vec p(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      p[i * b.size() + j] = a[i] * b[j];
    }
  }
  return p;
}

double tv_distance(const Vec& p, const Vec& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("tv_distance: length mismatch");
  }
  check_distribution(p, "tv_distance p");
  check_distribution(q, "tv_distance q");
  return 0.5 * (p - q).cwiseAbs().sum();
}

double tv_positive_part(const Vec& p, const Vec& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("tv_positive_part: length mismatch");
  }
  check_distribution(p, "tv_positive_part p");
  check_distribution(q, "tv_positive_part q");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (q[i] <= 0.0) {
      if (p[i] > 0.0) {
        throw std::invalid_argument(
            "tv_positive_part: p is not absolutely continuous w.r.t. q");
      }
      continue;
    }
    acc += q[i] * std::max(p[i] / q[i] - 1.0, 0.0);
  }
  return acc;
}

double information_density(const DiscreteChannel& ch, const Vec& qx,
                           std::span<const int> x_seq,
                           std::span<const int> z_seq) {
  if (x_seq.size() != z_seq.size()) {
    throw std::invalid_argument("information_density: length mismatch");
  }
  const Vec qz = output_marginal(ch, qx);
  double sum = 0.0;
  for (std::size_t i = 0; i < x_seq.size(); ++i) {
    const double k = ch.matrix(x_seq[i], z_seq[i]);
    if (k <= 0.0) return -kInf;
    if (qz[z_seq[i]] <= 0.0) return kInf;
    sum += std::log(k / qz[z_seq[i]]);
  }
  return sum;
}

double mutual_information(const DiscreteChannel& ch, const Vec& qx) {
  const Vec qz = output_marginal(ch, qx);
  double total = 0.0;
  for (int x = 0; x < ch.input_size(); ++x) {
    if (qx[x] <= 0.0) continue;
    for (int z = 0; z < ch.output_size(); ++z) {
      const double k = ch.matrix(x, z);
      if (k <= 0.0) continue;  // 0 * ln(0) = 0
      total += qx[x] * k * std::log(k / qz[z]);
    }
  }
  return total;
}

double renyi_divergence(const Vec& p, const Vec& q, double alpha) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("renyi_divergence: length mismatch");
  }
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw std::domain_error(
        "renyi_divergence: alpha must lie in (0,1) or (1,inf)");
  }
  check_distribution(p, "renyi_divergence p");
  check_distribution(q, "renyi_divergence q");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      if (alpha > 1.0) return kInf;
      continue;  // q^(1-alpha) = 0 for alpha < 1
    }
    sum += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
  }
  if (sum <= 0.0) return kInf;
  return std::log(sum) / (alpha - 1.0);
}

double atypical_probability(const DiscreteChannel& ch, const Vec& qx,
                            double eps, int n, std::int64_t budget) {
  if (n < 1) throw std::domain_error("atypical_probability: n must be >= 1");
  if (qx.size() != ch.input_size()) {
    throw std::invalid_argument("atypical_probability: dimension mismatch");
  }
  check_distribution(qx, "atypical_probability input");
  const Vec qz = output_marginal(ch, qx);

  // Per-letter (x, z) pair types with positive joint mass. Keying the
  // convolution by pair multiplicities keeps equal density values apart.
  std::vector<double> prob, val;
  for (int x = 0; x < ch.input_size(); ++x) {
    for (int z = 0; z < ch.output_size(); ++z) {
      const double pj = qx[x] * ch.matrix(x, z);
      if (pj > 0.0) {
        prob.push_back(pj);
        val.push_back(std::log(ch.matrix(x, z) / qz[z]));
      }
    }
  }
  const int types = static_cast<int>(prob.size());
  const double threshold = n * (mutual_information(ch, qx) + eps);

  // Number of multiplicity vectors is C(n + types - 1, types - 1).
  double combos = 1.0;
  for (int i = 1; i < types; ++i) {
    combos *= static_cast<double>(n + i) / i;
    if (combos > static_cast<double>(budget)) {
      throw budget_exceeded("atypical_probability: too many multiplicity "
                            "vectors for the enumeration budget");
    }
  }

  // Pascal's triangle; all entries are exact integers in double range here.
  std::vector<std::vector<double>> choose(n + 1, std::vector<double>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    choose[i][0] = 1.0;
    for (int j = 1; j <= i; ++j) {
      choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0);
    }
  }

  double total = 0.0;
  auto recurse = [&](auto&& self, int k, int remaining, double coeff,
                     double mass, double value) -> void {
    if (k == types - 1) {
      double m = mass;
      for (int c = 0; c < remaining; ++c) m *= prob[k];
      if (value + remaining * val[k] > threshold) total += coeff * m;
      return;
    }
    double m = mass;
    for (int c = 0; c <= remaining; ++c) {
      self(self, k + 1, remaining - c, coeff * choose[remaining][c], m,
           value + c * val[k]);
      m *= prob[k];
    }
  };
  if (types == 0) return 0.0;
  recurse(recurse, 0, n, 1.0, 1.0, 0.0);
  return total;
}

double distinguishing_advantage(const Codebook& cb, const DiscreteChannel& ch,
                                std::int64_t budget) {
  check_codebook(cb, ch);
  if (cb.messages < 2) return 0.0;
  std::vector<Vec> dists;
  dists.reserve(static_cast<std::size_t>(cb.messages));
  for (int m = 0; m < cb.messages; ++m) {
    dists.push_back(message_output_distribution(cb, m, ch, budget));
  }
  double adv = 0.0;
  for (int a = 0; a < cb.messages; ++a) {
    for (int b = a + 1; b < cb.messages; ++b) {
      adv = std::max(adv, 0.5 * (dists[a] - dists[b]).cwiseAbs().sum());
    }
  }
  return adv;
}

std::pair<double, double> semantic_advantage_interval(double adv_ds) {
  if (!(adv_ds >= 0.0) || !(adv_ds <= 1.0)) {
    throw std::domain_error(
        "semantic_advantage_interval: advantage must lie in [0, 1]");
  }
  return {adv_ds / 2.0, adv_ds};
}

Codebook random_codebook(const Vec& qx, int n, int messages, int randomness,
                         std::uint64_t seed) {
  if (messages < 1 || randomness < 1 || n < 1) {
    throw std::invalid_argument("random_codebook: L, L1 and n must be >= 1");
  }
  check_distribution(qx, "random_codebook input");
  const Vec cdf = cumulative(qx);
  auto g = make_engine(seed);
  Codebook cb;
  cb.n = n;
  cb.messages = messages;
  cb.randomness = randomness;
  cb.words.resize(static_cast<Eigen::Index>(messages) * randomness, n);
  for (Eigen::Index r = 0; r < cb.words.rows(); ++r) {
    for (int i = 0; i < n; ++i) {
      cb.words(r, i) = sample_symbol(cdf, uniform01(g));
    }
  }
  return cb;
}

std::pair<int, int> typicality_decode(std::span<const int> y_seq,
                                      const Codebook& cb,
                                      const DiscreteChannel& ch_bob,
                                      const Vec& qx, double eps) {
  check_codebook(cb, ch_bob);
  if (y_seq.size() != static_cast<std::size_t>(cb.n)) {
    throw std::invalid_argument("typicality_decode: sequence length mismatch");
  }
  const Decoder dec(ch_bob, qx, eps, cb.n);
  return dec.decode(cb, y_seq);
}

DecodingErrors average_errors(const Codebook& cb,
                              const DiscreteChannel& ch_bob, const Vec& qx,
                              double eps, std::int64_t budget) {
  check_codebook(cb, ch_bob);
  checked_states(ch_bob.output_size(), cb.n, budget);
  const Decoder dec(ch_bob, qx, eps, cb.n);

  double msg_err = 0.0, joint_err = 0.0;
  std::vector<int> y(static_cast<std::size_t>(cb.n), 0);
  do {
    const auto [mh, wh] = dec.decode(cb, y);
    for (int m = 0; m < cb.messages; ++m) {
      for (int w = 0; w < cb.randomness; ++w) {
        const double py = sequence_probability(ch_bob, cb.word(m, w), y);
        if (py == 0.0) continue;
        if (mh != m) msg_err += py;
        if (mh != m || wh != w) joint_err += py;
      }
    }
  } while (next_state(y, ch_bob.output_size()));

  const double pairs = static_cast<double>(cb.messages) * cb.randomness;
  return {msg_err / pairs, joint_err / pairs};
}

double mcdiarmid_rhs(double eps, std::int64_t l1) {
  if (!(eps > 0.0)) throw std::domain_error("mcdiarmid_rhs: eps must be > 0");
  if (l1 < 1) throw std::domain_error("mcdiarmid_rhs: L1 must be >= 1");
  return std::exp(-2.0 * eps * eps * static_cast<double>(l1));
}

ExponentPredictions exponent_predictions(const DiscreteWiretapSystem& sys,
                                         double alpha, double eps, double R,
                                         double R1) {
  validate(sys);
  if (!(alpha > 1.0)) {
    throw std::domain_error("exponent_predictions: alpha must exceed 1");
  }
  const Vec& qx = sys.input_dist;

  auto scaled_bound = [&](const DiscreteChannel& ch) {
    const double info = mutual_information(ch, qx);
    const Vec qz = output_marginal(ch, qx);
    const double div = renyi_divergence(joint_distribution(ch, qx),
                                        product_distribution(qx, qz), alpha);
    if (!std::isfinite(div)) return 0.0;  // no admissible exponent
    return (alpha - 1.0) * (info + eps - div);
  };

  ExponentPredictions pred;
  pred.eve_atypical.resize(static_cast<Eigen::Index>(sys.eves.size()));
  for (std::size_t j = 0; j < sys.eves.size(); ++j) {
    pred.eve_atypical[static_cast<Eigen::Index>(j)] = scaled_bound(sys.eves[j]);
  }
  pred.bob_atypical = scaled_bound(sys.bob);
  pred.bob_collision = mutual_information(sys.bob, qx) + eps - R - R1;
  return pred;
}

DecayResult security_decay_experiment(const DiscreteWiretapSystem& sys,
                                      double R, double R1,
                                      std::span<const int> n_list, int trials,
                                      std::uint64_t seed,
                                      std::int64_t budget) {
  validate(sys);
  if (trials < 1) {
    throw std::invalid_argument("decay experiment: trials must be >= 1");
  }
  const Vec& qx = sys.input_dist;
  const double info_bob = mutual_information(sys.bob, qx);
  double info_eve_max = 0.0;
  for (const auto& eve : sys.eves) {
    info_eve_max = std::max(info_eve_max, mutual_information(eve, qx));
  }

  DecayResult result;
  result.rate_condition_ok = R1 > info_eve_max && R + R1 < info_bob;
  const double eps_decode = 0.1 * info_bob;

  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    const int n = n_list[idx];
    const int messages = static_cast<int>(
        std::max<std::int64_t>(1, std::llround(std::exp(n * R))));
    const int randomness = static_cast<int>(
        std::max<std::int64_t>(1, std::llround(std::exp(n * R1))));

    DecaySummaryRow summary;
    summary.n = n;
    try {
      checked_states(sys.bob.output_size(), n, budget);
      std::vector<Vec> qzn;
      for (const auto& eve : sys.eves) {
        qzn.push_back(iid_product(output_marginal(eve, qx), n, budget));
      }

      for (int t = 0; t < trials; ++t) {
        const auto stream =
            idx * static_cast<std::uint64_t>(trials) + static_cast<std::uint64_t>(t);
        const Codebook cb =
            random_codebook(qx, n, messages, randomness, mix_seed(seed, stream));

        double tv_max = 0.0;
        for (std::size_t j = 0; j < sys.eves.size(); ++j) {
          for (int m = 0; m < messages; ++m) {
            const Vec pm = message_output_distribution(cb, m, sys.eves[j], budget);
            tv_max = std::max(tv_max, 0.5 * (pm - qzn[j]).cwiseAbs().sum());
          }
        }
        const DecodingErrors err =
            average_errors(cb, sys.bob, qx, eps_decode, budget);

        result.trials.push_back({n, t, tv_max, err.joint, err.message});
        summary.mean_tv_max += tv_max;
        summary.mean_p_err_joint += err.joint;
        summary.mean_p_err_msg += err.message;
      }
      summary.mean_tv_max /= trials;
      summary.mean_p_err_joint /= trials;
      summary.mean_p_err_msg /= trials;
    } catch (const budget_exceeded&) {
      summary = DecaySummaryRow{};
      summary.n = n;
      summary.skipped = true;
    }
    result.summary.push_back(summary);
  }
  return result;
}

double fit_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_log_slope: need >= 2 paired points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) {
      throw std::invalid_argument("fit_log_slope: values must be positive");
    }
    mx += x[i];
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (std::log(y[i]) - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den <= 0.0) {
    throw std::invalid_argument("fit_log_slope: degenerate abscissae");
  }
  return num / den;
}

McErrors mc_average_errors(const Codebook& cb, const DiscreteChannel& ch_bob,
                           const Vec& qx, double eps, int trials,
                           std::uint64_t seed) {
  check_codebook(cb, ch_bob);
  if (trials < 1) {
    throw std::invalid_argument("mc_average_errors: trials must be >= 1");
  }
  const Decoder dec(ch_bob, qx, eps, cb.n);
  std::vector<Vec> row_cdf;
  for (int x = 0; x < ch_bob.input_size(); ++x) {
    row_cdf.push_back(cumulative(ch_bob.matrix.row(x).transpose()));
  }

  auto g = make_engine(seed);
  const int pairs = cb.messages * cb.randomness;
  std::vector<int> y(static_cast<std::size_t>(cb.n));
  long msg_fail = 0, joint_fail = 0;
  for (int t = 0; t < trials; ++t) {
    const int pick = std::min(static_cast<int>(uniform01(g) * pairs), pairs - 1);
    const int m = pick / cb.randomness;
    const int w = pick % cb.randomness;
    const auto x_seq = cb.word(m, w);
    for (int i = 0; i < cb.n; ++i) {
      y[static_cast<std::size_t>(i)] = sample_symbol(row_cdf[x_seq[i]], uniform01(g));
    }
    const auto [mh, wh] = dec.decode(cb, y);
    if (mh != m) ++msg_fail;
    if (mh != m || wh != w) ++joint_fail;
  }

  auto estimate = [trials](long fails) {
    const double p = static_cast<double>(fails) / trials;
    return McEstimate{p, std::sqrt(p * (1.0 - p) / trials)};
  };
  return {estimate(msg_fail), estimate(joint_fail)};
}

McEstimate mc_distinguishing_advantage(const Codebook& cb,
                                       const DiscreteChannel& ch,
                                       int trials_per_pair,
                                       std::uint64_t seed) {
  check_codebook(cb, ch);
  if (trials_per_pair < 2) {
    throw std::invalid_argument("mc_distinguishing_advantage: need >= 2 trials");
  }
  if (cb.messages < 2) return {0.0, 0.0};

  std::vector<Vec> row_cdf;
  for (int x = 0; x < ch.input_size(); ++x) {
    row_cdf.push_back(cumulative(ch.matrix.row(x).transpose()));
  }
  // Pointwise codebook-mixture density of one message at a sequence.
  auto mixture = [&](int m, const std::vector<int>& z) {
    double acc = 0.0;
    for (int w = 0; w < cb.randomness; ++w) {
      acc += sequence_probability(ch, cb.word(m, w), z);
    }
    return acc / cb.randomness;
  };

  auto g = make_engine(seed);
  McEstimate best{0.0, 0.0};
  std::vector<int> z(static_cast<std::size_t>(cb.n));
  for (int a = 0; a < cb.messages; ++a) {
    for (int b = 0; b < cb.messages; ++b) {
      if (a == b) continue;
      // TV(P_a, P_b) = E_{P_b}[(P_a/P_b - 1)^+], sampled from P_b.
      double sum = 0.0, sum_sq = 0.0;
      for (int t = 0; t < trials_per_pair; ++t) {
        const int w = std::min(static_cast<int>(uniform01(g) * cb.randomness),
                               cb.randomness - 1);
        const auto x_seq = cb.word(b, w);
        for (int i = 0; i < cb.n; ++i) {
          z[static_cast<std::size_t>(i)] =
              sample_symbol(row_cdf[x_seq[i]], uniform01(g));
        }
        const double pb = mixture(b, z);
        const double v = pb > 0.0 ? std::max(mixture(a, z) / pb - 1.0, 0.0) : 0.0;
        sum += v;
        sum_sq += v * v;
      }
      const double mean = sum / trials_per_pair;
      const double var =
          std::max(0.0, sum_sq / trials_per_pair - mean * mean);
      const double se = std::sqrt(var / (trials_per_pair - 1));
      if (mean > best.value) best = {mean, se};
    }
  }
  return best;
}

SecurityReport security_report(const DiscreteWiretapSystem& sys,
                               const Codebook& cb, double eps_decode,
                               double alpha, double eps_typ,
                               std::int64_t budget) {
  validate(sys);
  SecurityReport report;
  for (const auto& eve : sys.eves) {
    EveSecurity es;
    const Vec qzn = iid_product(output_marginal(eve, sys.input_dist), cb.n, budget);
    es.per_message_tv.resize(cb.messages);
    double adv = 0.0;
    std::vector<Vec> dists;
    for (int m = 0; m < cb.messages; ++m) {
      dists.push_back(message_output_distribution(cb, m, eve, budget));
      es.per_message_tv[m] = 0.5 * (dists.back() - qzn).cwiseAbs().sum();
    }
    for (int a = 0; a < cb.messages; ++a) {
      for (int b = a + 1; b < cb.messages; ++b) {
        adv = std::max(adv, 0.5 * (dists[a] - dists[b]).cwiseAbs().sum());
      }
    }
    es.adv_ds = adv;
    es.adv_ss_interval = semantic_advantage_interval(adv);
    report.eves.push_back(std::move(es));
  }
  const DecodingErrors err =
      average_errors(cb, sys.bob, sys.input_dist, eps_decode, budget);
  report.p_err_message = err.message;
  report.p_err_joint = err.joint;
  report.exponents = exponent_predictions(sys, alpha, eps_typ, cb.rate(),
                                          cb.randomness_rate());
  return report;
}

}  // namespace riswt
