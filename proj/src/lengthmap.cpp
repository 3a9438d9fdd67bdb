#include "relulab/lengthmap.hpp"

#include <cmath>
#include <stdexcept>

#include "relulab/parallel.hpp"

namespace relulab {

std::vector<double> q_of(const ActivationTrace& trace, const Architecture& arch) {
  if (static_cast<int>(trace.pre.size()) != arch.depth())
    throw std::invalid_argument("q_of: trace does not match architecture");
  std::vector<double> q(trace.pre.size());
  for (std::size_t l = 0; l < trace.pre.size(); ++l) {
    double acc = 0.0;
    for (double v : trace.pre[l]) acc += v * v;
    q[l] = acc / static_cast<double>(arch.width(static_cast<int>(l) + 1));
  }
  return q;
}

LengthStats estimate_lengthmap(const Architecture& arch, const InitScheme& scheme,
                               const std::vector<double>& x, long long trials,
                               const Rng& rng, unsigned jobs) {
  if (trials < 1) throw std::invalid_argument("estimate_lengthmap: trials must be >= 1");
  if (static_cast<int>(x.size()) != arch.input_dim())
    throw std::invalid_argument("estimate_lengthmap: input length mismatch");
  const std::size_t L = static_cast<std::size_t>(arch.depth());

  // Per-trial results are stored by index, then reduced serially, so the
  // statistics do not depend on the thread count.
  std::vector<std::vector<double>> per_trial_q(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    RngStream stream = rng.trial_stream(t);
    const Params p = initialize(arch, scheme, stream);
    per_trial_q[t] = q_of(forward_trace(p, x), arch);
  });

  LengthStats stats(L);
  std::vector<double> col(static_cast<std::size_t>(trials));
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t t = 0; t < col.size(); ++t) col[t] = per_trial_q[t][l];
    stats[l].layer = static_cast<int>(l) + 1;
    stats[l].mean_q = mean(col);
    stats[l].ci95 = mean_ci95(col);
    stats[l].trials = trials;
  }
  return stats;
}

MomentBounds moment_bounds(int N, double mu1, double mu2, double sigma_w) {
  if (N < 1 || mu1 <= 0.0 || mu2 <= 0.0 || sigma_w <= 0.0)
    throw std::invalid_argument("moment_bounds: all inputs must be positive");
  MomentBounds b;
  b.N = N;
  b.mu1 = mu1;
  b.mu2 = mu2;
  b.sigma_w = sigma_w;
  const double n = static_cast<double>(N);
  b.sigma_b2 = (mu2 + sigma_w * sigma_w) / (n + 1.0);
  b.a_low = n * (mu2 + sigma_w * sigma_w) / (n + 1.0);
  b.a_upp = n *
            (sigma_w * sigma_w + 2.0 * std::sqrt(2.0 / std::numbers::pi) * mu1 * sigma_w +
             2.0 * mu2) /
            (n + 1.0);
  return b;
}

std::vector<TransitionVerdict> check_recursion(const LengthStats& stats,
                                               const MomentBounds& bounds) {
  std::vector<TransitionVerdict> verdicts;
  for (std::size_t i = 0; i + 1 < stats.size(); ++i) {
    const LayerLengthStat& a = stats[i];
    const LayerLengthStat& b = stats[i + 1];
    if (b.layer != a.layer + 1)
      throw std::invalid_argument("check_recursion: stats must cover consecutive layers");
    if (a.layer < 2) continue;  // first layer is outside the recursion
    const double slack_a_low = a.mean_q - a.ci95.low;
    const double slack_a_high = a.ci95.high - a.mean_q;
    const double slack_b = b.ci95.high - b.mean_q;
    TransitionVerdict v;
    v.from_layer = a.layer;
    v.observed = b.mean_q;
    v.predicted_low =
        bounds.a_low / 2.0 * (a.mean_q - slack_a_low) + bounds.sigma_b2 - slack_b;
    v.predicted_high =
        bounds.a_upp / 2.0 * (a.mean_q + slack_a_high) + bounds.sigma_b2 + slack_b;
    v.pass = v.observed >= v.predicted_low && v.observed <= v.predicted_high;
    verdicts.push_back(v);
  }
  return verdicts;
}

}  // namespace relulab
