#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "relulab/init.hpp"
#include "relulab/net.hpp"
#include "relulab/rng.hpp"
#include "relulab/stats.hpp"
#include "relulab/types.hpp"

namespace relulab {

// Uniform grid of `points` on [-r, r] (d_in = 1).
struct Grid1D {
  int points = 101;
  double r = 1.0;
};

// Points uniform in the closed d_in-ball of radius r. For d_in = 1 the draw
// is re-balanced so both signs are present.
struct RandomBall {
  int points = 101;
  double r = 1.0;
  int d_in = 2;
  std::uint64_t seed = 0;
};

using DataSpec = std::variant<Grid1D, RandomBall>;

Dataset materialize(const DataSpec& spec);

struct DeadCheck {
  bool dead = false;
  std::optional<int> layer;  // smallest dead hidden layer, 1-based
};

// A network is born dead iff some hidden layer's post-activation is exactly
// zero for every input. Exact-zero test: ReLU emits IEEE zeros and continuous
// initializations put ties at probability zero.
DeadCheck is_born_dead(const Params& params, const Dataset& data);

// Output identical (within tol, absolute) across all inputs.
bool is_constant_on(const Params& params, const Dataset& data, double tol = 1e-12);

struct BdpEstimate {
  long long trials = 0;
  long long dead = 0;
  double p_hat = 0.0;
  Interval ci95{};
};

// Monte Carlo born-dead probability over `trials` independent draws from the
// scheme. Trials run in parallel with per-trial derived seeds; the result does
// not depend on the thread count.
BdpEstimate estimate_bdp(const Architecture& arch, const InitScheme& scheme,
                         const Dataset& data, long long trials, const Rng& rng,
                         unsigned jobs = 1);

// 1 - prod_l (1 - (1/2)^{N_l}) over hidden widths; empty list -> 0.
double upper_bound_sym(const std::vector<int>& hidden_widths);

// Constant-width convenience: hidden widths N_1 = ... = N_{L-1} = N.
double upper_bound_sym_const(int L, int N);

// Closed-form lower bound p_low(L, N) for bias-free symmetric init, d_in = 1.
double lower_bound_d1(int L, int N);

// Same number via the 3x3 transition-matrix power: first component of
// pi_1 * P^{L-2}. Independent route used as the oracle for lower_bound_d1.
double plow_markov_oracle(int L, int N);

// Smallest constant width with symmetric-init BDP upper bound <= delta:
// ceil(log2(L / delta)), at least 1.
int safe_width(int L, double delta);

// Largest depth the Corollary guarantees at width N: floor(delta * 2^N).
long long max_depth(int N, double delta);

// MC estimate of P(<w, v1> > 0, <w, v2> < 0) for Gaussian rows w.
double quadrant_prob_mc(const std::vector<double>& v1, const std::vector<double>& v2,
                        long long rows, RngStream& rng);

// Max of quadrant_prob_mc over random nonnegative nonzero pairs (v1, v2);
// sanity check that the value stays <= 1/4 as the lower-bound theorem assumes.
double quadrant_prob_estimate(int N, int pairs, long long rows_per_pair, RngStream& rng);

}  // namespace relulab
