#include "riswt/mm_kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riswt {

namespace {

// Slopes of the active tangents at the anchor: max_j beta/(1 + beta*anchor),
// taken per coordinate. beta/(1+beta*a) is increasing in beta, so this is
// the slope of the strongest eavesdropper on each link.
double tangent_slope(const Arr& betas, double anchor) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < betas.size(); ++j) {
    s = std::max(s, betas[j] / (1.0 + betas[j] * anchor));
  }
  return s;
}

// Unconstrained stationary point of ln(1+p*mu) - slope*p, clamped to [0, pt].
double clamped_axis_optimum(double mu, double slope, double pt) {
  if (!(mu > 0.0)) return 0.0;
  if (!(slope > 0.0)) return pt;
  return std::clamp(1.0 / slope - 1.0 / mu, 0.0, pt);
}

struct StepDetail {
  KktCandidate chosen;
  double surrogate = 0.0;
};

bool better(double sur_a, const KktCandidate& a, double sur_b,
            const KktCandidate& b) {
  if (sur_a != sur_b) return sur_a > sur_b;
  if (a.p1 != b.p1) return a.p1 > b.p1;
  return a.p2 > b.p2;
}

// Tangent envelope of one eavesdropper at the anchor, e(p) = c0 + s1*p1 + s2*p2.
struct Affine {
  double c0 = 0.0, s1 = 0.0, s2 = 0.0;
};

std::vector<Affine> tangent_envelope(const SurrogateAnchor& anchor,
                                     const SnrCoefficients& c) {
  std::vector<Affine> env(static_cast<std::size_t>(c.num_eves()));
  for (Eigen::Index j = 0; j < c.num_eves(); ++j) {
    Affine& e = env[static_cast<std::size_t>(j)];
    e.s1 = c.beta1[j] / (1.0 + c.beta1[j] * anchor.p1);
    e.s2 = c.beta2[j] / (1.0 + c.beta2[j] * anchor.p2);
    e.c0 = tangent_line(c.beta1[j], anchor.p1, 0.0) +
           tangent_line(c.beta2[j], anchor.p2, 0.0);
  }
  return env;
}

// Real roots of qa*t^2 + qb*t + qc = 0 (the numerically stable variant).
void quadratic_roots(double qa, double qb, double qc, std::vector<double>& out) {
  out.clear();
  if (qa == 0.0) {
    if (qb != 0.0) out.push_back(-qc / qb);
    return;
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return;
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  out.push_back(q / qa);
  if (q != 0.0) out.push_back(qc / q);
}

// The two paper cases solve the inner problem with the per-link maxima of
// the tangent slopes, which is exact only when a single eavesdropper owns
// both maxima (always true for d = 1). The exact maximizer of the concave
// surrogate can otherwise sit at a stationary point of one eavesdropper's
// smooth piece or on a kink of the tangent envelope, so those points are
// enumerated too; all of them are closed-form.
void exact_pool_extras(const SurrogateAnchor& anchor, const SnrCoefficients& c,
                       double pt, std::vector<KktCandidate>& out) {
  const auto env = tangent_envelope(anchor, c);
  const double tol = 1e-12 * std::max(1.0, pt);
  std::vector<double> roots;

  auto push = [&](double p1, double p2, KktCase tag) {
    if (!std::isfinite(p1) || !std::isfinite(p2)) return;
    if (p1 < -tol || p2 < -tol || p1 + p2 > pt + tol) return;
    KktCandidate cand;
    cand.p1 = std::clamp(p1, 0.0, pt);
    cand.p2 = std::clamp(p2, 0.0, pt - cand.p1);
    cand.tag = tag;
    out.push_back(cand);
  };

  for (const Affine& e : env) {
    // smooth stationary point of Bob's terms against this tangent pair
    const double q1 = e.s1 > 0.0 && c.mu1 > 0.0 ? 1.0 / e.s1 - 1.0 / c.mu1
                                                : std::numeric_limits<double>::infinity();
    const double q2 = e.s2 > 0.0 && c.mu2 > 0.0 ? 1.0 / e.s2 - 1.0 / c.mu2
                                                : std::numeric_limits<double>::infinity();
    push(q1, q2, KktCase::interior);
    // axis restrictions of the same piece
    if (c.mu1 > 0.0) push(std::clamp(q1, 0.0, pt), 0.0, KktCase::corner_p2_zero);
    if (c.mu2 > 0.0) push(0.0, std::clamp(q2, 0.0, pt), KktCase::corner_p1_zero);
    // budget face against this pair: same quadratic as case 2 with the
    // per-eavesdropper slope difference
    const double d = e.s1 - e.s2;
    quadratic_roots(d * c.mu1 * c.mu2,
                    -d * (c.mu1 - c.mu2) - c.mu1 * c.mu2 * (d * pt + 2.0),
                    c.mu1 - c.mu2 - d + pt * (c.mu1 * c.mu2 - d * c.mu2), roots);
    for (double r : roots) push(r, pt - r, KktCase::budget_active);
  }

  // Kink lines e_j = e_k: n1*p1 + n2*p2 = r.
  struct Line {
    double n1, n2, r;
  };
  std::vector<Line> lines;
  for (std::size_t j = 0; j < env.size(); ++j) {
    for (std::size_t k = j + 1; k < env.size(); ++k) {
      const double n1 = env[j].s1 - env[k].s1;
      const double n2 = env[j].s2 - env[k].s2;
      if (n1 == 0.0 && n2 == 0.0) continue;  // parallel envelopes, no kink
      lines.push_back({n1, n2, env[k].c0 - env[j].c0});
      const Line& ln = lines.back();

      // kink against the triangle edges
      if (ln.n1 != 0.0) push(ln.r / ln.n1, 0.0, KktCase::corner_p2_zero);
      if (ln.n2 != 0.0) push(0.0, ln.r / ln.n2, KktCase::corner_p1_zero);
      if (ln.n1 != ln.n2) {
        const double p1 = (ln.r - ln.n2 * pt) / (ln.n1 - ln.n2);
        push(p1, pt - p1, KktCase::budget_active);
      }

      // stationary point of the smooth part along the kink line
      double x0, y0;
      if (std::abs(ln.n1) >= std::abs(ln.n2)) {
        x0 = ln.r / ln.n1;
        y0 = 0.0;
      } else {
        x0 = 0.0;
        y0 = ln.r / ln.n2;
      }
      const double d1 = -ln.n2, d2 = ln.n1;
      const double w = d1 * env[j].s1 + d2 * env[j].s2;
      const double a1 = 1.0 + x0 * c.mu1, b1 = d1 * c.mu1;
      const double a2 = 1.0 + y0 * c.mu2, b2 = d2 * c.mu2;
      quadratic_roots(w * b1 * b2, w * (a1 * b2 + a2 * b1) - 2.0 * b1 * b2,
                      w * a1 * a2 - b1 * a2 - b2 * a1, roots);
      for (double t : roots) push(x0 + t * d1, y0 + t * d2, KktCase::interior);
    }
  }

  // intersections of two kink lines (three or more envelopes active)
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const double det = lines[a].n1 * lines[b].n2 - lines[a].n2 * lines[b].n1;
      if (det == 0.0) continue;
      const double p1 = (lines[a].r * lines[b].n2 - lines[b].r * lines[a].n2) / det;
      const double p2 = (lines[a].n1 * lines[b].r - lines[b].n1 * lines[a].r) / det;
      push(p1, p2, KktCase::interior);
    }
  }
}

StepDetail step_detail(const SurrogateAnchor& anchor, const SnrCoefficients& c,
                       double pt) {
  auto candidates = kkt_candidates(anchor, c, pt);
  if (c.num_eves() > 1) exact_pool_extras(anchor, c, pt, candidates);
  KktCandidate best = candidates.front();
  double best_sur = surrogate_value(best.p1, best.p2, anchor, c);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double sur =
        surrogate_value(candidates[i].p1, candidates[i].p2, anchor, c);
    if (better(sur, candidates[i], best_sur, best)) {
      best = candidates[i];
      best_sur = sur;
    }
  }
  // The surrogate touches the objective at the anchor; never move to a
  // candidate below that value, so the raw rate cannot decrease.
  const double anchor_sur = surrogate_value(anchor.p1, anchor.p2, anchor, c);
  if (best_sur < anchor_sur) {
    KktCandidate stay;
    stay.p1 = anchor.p1;
    stay.p2 = anchor.p2;
    stay.tag = KktCase::interior;
    return {stay, anchor_sur};
  }
  return {best, best_sur};
}

}  // namespace

const char* to_string(KktCase c) {
  switch (c) {
    case KktCase::interior: return "interior";
    case KktCase::budget_active: return "budget_active";
    case KktCase::corner_p1_zero: return "corner_p1_zero";
    case KktCase::corner_p2_zero: return "corner_p2_zero";
    case KktCase::origin: return "origin";
  }
  return "unknown";
}

double tangent_line(double beta, double anchor, double p) {
  const double denom = 1.0 + beta * anchor;
  return std::log1p(beta * anchor) + beta * (p - anchor) / denom;
}

double surrogate_value(double p1, double p2, const SurrogateAnchor& anchor,
                       const SnrCoefficients& c) {
  const double bob = std::log1p(p1 * c.mu1) + std::log1p(p2 * c.mu2);
  double eve = 0.0;
  for (Eigen::Index j = 0; j < c.num_eves(); ++j) {
    const double t = tangent_line(c.beta1[j], anchor.p1, p1) +
                     tangent_line(c.beta2[j], anchor.p2, p2);
    eve = j == 0 ? t : std::max(eve, t);
  }
  return bob - eve;
}

std::optional<KktCandidate> solve_case1(const SurrogateAnchor& anchor,
                                        const SnrCoefficients& c, double pt) {
  if (!(c.mu1 > 0.0) || !(c.mu2 > 0.0)) return std::nullopt;
  if ((c.beta1 <= 0.0).any() || (c.beta2 <= 0.0).any() || c.num_eves() == 0) {
    return std::nullopt;  // degenerate slopes are handled by the corners
  }
  // Stationarity with lambda = 0: mu/(1+P*mu) equals the active tangent
  // slope on each link.
  const double s1 = tangent_slope(c.beta1, anchor.p1);
  const double s2 = tangent_slope(c.beta2, anchor.p2);
  const double p1 = 1.0 / s1 - 1.0 / c.mu1;
  const double p2 = 1.0 / s2 - 1.0 / c.mu2;
  const double tol = 1e-12 * std::max(1.0, pt);
  if (p1 < -tol || p2 < -tol || p1 + p2 > pt + tol) return std::nullopt;
  KktCandidate cand;
  cand.p1 = std::max(0.0, p1);
  cand.p2 = std::max(0.0, p2);
  cand.lambda = 0.0;
  cand.tag = KktCase::interior;
  return cand;
}

std::vector<KktCandidate> solve_case2(const SurrogateAnchor& anchor,
                                      const SnrCoefficients& c, double pt) {
  if (!(pt > 0.0)) {
    throw std::domain_error("solve_case2: pt must be positive");
  }
  const double s1 = tangent_slope(c.beta1, anchor.p1);
  const double s2 = tangent_slope(c.beta2, anchor.p2);
  const double d = s1 - s2;
  const double mu1 = c.mu1, mu2 = c.mu2;

  // Eliminating the multiplier from the two stationarity equations with
  // P2 = Pt - P1 leaves a quadratic in P1.
  const double qa = d * mu1 * mu2;
  const double qb = -d * (mu1 - mu2) - mu1 * mu2 * (d * pt + 2.0);
  const double qc = mu1 - mu2 - d + pt * (mu1 * mu2 - d * mu2);

  std::vector<double> roots;
  if (qa == 0.0) {
    if (qb != 0.0) roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Stable form: compute the larger-magnitude root first.
      const double q = -0.5 * (qb + std::copysign(sq, qb));
      roots.push_back(q / qa);
      if (q != 0.0) roots.push_back(qc / q);
    }
  }

  std::vector<KktCandidate> out;
  const double tol = 1e-12 * std::max(1.0, pt);
  for (double r : roots) {
    if (!std::isfinite(r) || r < -tol || r > pt + tol) continue;
    KktCandidate cand;
    cand.p1 = std::clamp(r, 0.0, pt);
    cand.p2 = pt - cand.p1;
    cand.lambda = mu1 / (1.0 + cand.p1 * mu1) - s1;
    cand.tag = KktCase::budget_active;
    if (*cand.lambda >= -1e-12) out.push_back(cand);
  }
  return out;
}

std::vector<KktCandidate> kkt_candidates(const SurrogateAnchor& anchor,
                                         const SnrCoefficients& c, double pt) {
  if (!(pt > 0.0)) {
    throw std::domain_error("kkt_candidates: pt must be positive");
  }
  std::vector<KktCandidate> out;
  if (auto c1 = solve_case1(anchor, c, pt)) out.push_back(*c1);
  for (const auto& cand : solve_case2(anchor, c, pt)) out.push_back(cand);

  const double s1 = tangent_slope(c.beta1, anchor.p1);
  const double s2 = tangent_slope(c.beta2, anchor.p2);
  auto push = [&out](double p1, double p2, KktCase tag) {
    KktCandidate cand;
    cand.p1 = p1;
    cand.p2 = p2;
    cand.tag = tag;
    out.push_back(cand);
  };
  push(0.0, 0.0, KktCase::origin);
  push(clamped_axis_optimum(c.mu1, s1, pt), 0.0, KktCase::corner_p2_zero);
  push(0.0, clamped_axis_optimum(c.mu2, s2, pt), KktCase::corner_p1_zero);
  push(pt, 0.0, KktCase::corner_p2_zero);
  push(0.0, pt, KktCase::corner_p1_zero);
  return out;
}

std::pair<SurrogateAnchor, double> mm_step(const SurrogateAnchor& anchor,
                                           const SnrCoefficients& c,
                                           double pt) {
  const StepDetail d = step_detail(anchor, c, pt);
  return {{d.chosen.p1, d.chosen.p2}, d.surrogate};
}

std::pair<PowerAllocation, OptimizerTrace> optimize(
    const SnrCoefficients& c, double pt, const OptimizerConfig& cfg,
    std::optional<SurrogateAnchor> start) {
  if (!(pt > 0.0)) throw std::domain_error("optimize: pt must be positive");
  if (!std::isfinite(c.mu1) || !std::isfinite(c.mu2) ||
      !c.beta1.isFinite().all() || !c.beta2.isFinite().all()) {
    throw std::domain_error("optimize: coefficients must be finite");
  }
  if (cfg.max_iterations < 1) {
    throw std::domain_error("optimize: max_iterations must be >= 1");
  }
  if (!(cfg.tolerance > 0.0)) {
    throw std::domain_error("optimize: tolerance must be positive");
  }

  struct Run {
    SurrogateAnchor final;
    OptimizerTrace trace;
    double rate = 0.0;
  };
  auto run_from = [&](SurrogateAnchor anchor) {
    Run run;
    run.trace.reserve(16);
    double prev_rate = secrecy_rate({anchor.p1, anchor.p2, pt}, c);
    while (static_cast<int>(run.trace.size()) < cfg.max_iterations) {
      const StepDetail d = step_detail(anchor, c, pt);
      const double rate = secrecy_rate({d.chosen.p1, d.chosen.p2, pt}, c);
      run.trace.push_back({anchor, d.chosen, d.surrogate, rate});
      anchor = {d.chosen.p1, d.chosen.p2};
      if (std::abs(rate - prev_rate) < cfg.tolerance) break;
      prev_rate = rate;
    }
    run.final = anchor;
    run.rate = secrecy_rate({anchor.p1, anchor.p2, pt}, c);
    return run;
  };

  // The ascent is local, so the basin around the starting anchor decides
  // where it settles. The single-link vertices seed the basins the center
  // start misses most often; the best of the three runs wins and its own
  // monotone trace is the one reported.
  Run best = run_from(start.value_or(SurrogateAnchor{pt / 2.0, pt / 2.0}));
  for (const SurrogateAnchor& v : {SurrogateAnchor{pt, 0.0},
                                   SurrogateAnchor{0.0, pt}}) {
    Run run = run_from(v);
    if (run.rate > best.rate) best = std::move(run);
  }

  // Transmitting nothing always achieves rate zero. When the ascent stalls
  // at a negative stationary point, hand back the origin instead; the extra
  // trace entry keeps the rate column monotone.
  if (best.rate < 0.0 &&
      static_cast<int>(best.trace.size()) < cfg.max_iterations) {
    KktCandidate origin;
    origin.tag = KktCase::origin;
    best.trace.push_back(
        {best.final, origin, surrogate_value(0.0, 0.0, best.final, c), 0.0});
    best.final = {0.0, 0.0};
  }
  return {{best.final.p1, best.final.p2, pt}, best.trace};
}

std::pair<PowerAllocation, double> grid_oracle(const SnrCoefficients& c,
                                               double pt, double resolution) {
  if (!(resolution > 0.0) || !(resolution < 1.0)) {
    throw std::domain_error("grid_oracle: resolution must be in (0, 1)");
  }
  if (!(pt > 0.0)) throw std::domain_error("grid_oracle: pt must be positive");
  const auto n = static_cast<Eigen::Index>(std::llround(1.0 / resolution));
  const double step = pt / static_cast<double>(n);
  const auto d = c.num_eves();

  // Per-axis tables so a grid point is a handful of lookups.
  Mat eve1(d, n + 1), eve2(d, n + 1);
  Vec bob1(n + 1), bob2(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double p = static_cast<double>(i) * step;
    bob1[i] = std::log1p(p * c.mu1);
    bob2[i] = std::log1p(p * c.mu2);
    for (Eigen::Index j = 0; j < d; ++j) {
      eve1(j, i) = std::log1p(p * c.beta1[j]);
      eve2(j, i) = std::log1p(p * c.beta2[j]);
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  Eigen::Index bi = 0, bj = 0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    for (Eigen::Index j = 0; j <= n - i; ++j) {
      double eve = -std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < d; ++k) {
        eve = std::max(eve, eve1(k, i) + eve2(k, j));
      }
      if (d == 0) eve = 0.0;
      const double rate = bob1[i] + bob2[j] - eve;
      if (rate > best || (rate == best && (i > bi || (i == bi && j > bj)))) {
        best = rate;
        bi = i;
        bj = j;
      }
    }
  }
  PowerAllocation alloc{static_cast<double>(bi) * step,
                        static_cast<double>(bj) * step, pt};
  return {alloc, best};
}

}  // namespace riswt
