#pragma once

#include <vector>

#include "relulab/init.hpp"
#include "relulab/net.hpp"
#include "relulab/rng.hpp"
#include "relulab/stats.hpp"
#include "relulab/types.hpp"

namespace relulab {

// Normalized squared pre-activation length q^l(x) = |N^l(x)|^2 / N_l for
// every layer of a trace.
std::vector<double> q_of(const ActivationTrace& trace, const Architecture& arch);

struct LayerLengthStat {
  int layer = 0;  // 1-based
  double mean_q = 0.0;
  Interval ci95{};
  long long trials = 0;
};

using LengthStats = std::vector<LayerLengthStat>;

// Monte Carlo E[q^l(x)] over independent initializations at fixed input x.
LengthStats estimate_lengthmap(const Architecture& arch, const InitScheme& scheme,
                               const std::vector<double>& x, long long trials,
                               const Rng& rng, unsigned jobs = 1);

// Constant-width recursion constants from the second-moment analysis:
//   sigma_b2 = (mu2 + sigma_w^2) / (N+1)
//   a_low    = N (mu2 + sigma_w^2) / (N+1)
//   a_upp    = N (sigma_w^2 + 2 sqrt(2/pi) mu1 sigma_w + 2 mu2) / (N+1)
struct MomentBounds {
  int N = 0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma_w = 0.0;
  double sigma_b2 = 0.0;
  double a_low = 0.0;
  double a_upp = 0.0;
};

MomentBounds moment_bounds(int N, double mu1, double mu2, double sigma_w);

struct TransitionVerdict {
  int from_layer = 0;  // transition q^l -> q^{l+1}
  double observed = 0.0;
  double predicted_low = 0.0;   // a_low/2 * mean_q^l + sigma_b2, minus CI slack
  double predicted_high = 0.0;  // a_upp/2 * mean_q^l + sigma_b2, plus CI slack
  bool pass = false;
};

// Checks mean_q^{l+1} against the recursion interval for l >= 2 (layer 1 is
// He-initialized and sits outside the recursion). The interval is expanded by
// the 95% CI half-widths of both layers; the bounds hold for exact
// expectations, so finite-sample slack is mandatory.
std::vector<TransitionVerdict> check_recursion(const LengthStats& stats,
                                               const MomentBounds& bounds);

}  // namespace relulab
