#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relulab/init.hpp"
#include "relulab/net.hpp"
#include "relulab/rng.hpp"
#include "relulab/stats.hpp"
#include "relulab/types.hpp"

namespace relulab {

// Test targets:
//   F1(x) = |x|
//   F2(x) = x sin(5x)
//   F3(x) = 1_{x>0} + 0.2 sin(5x)
//   F4(x1,x2) = [|x1+x2|, |x1-x2|]
enum class TargetFn { F1, F2, F3, F4 };

int target_input_dim(TargetFn t);
int target_output_dim(TargetFn t);
std::vector<double> eval_target(TargetFn t, std::span<const double> x);
std::string target_name(TargetFn t);
TargetFn target_from_name(const std::string& name);

struct TrainConfig {
  int epochs = 1000;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  LossKind loss = LossKind::L2;
  int train_points = 3000;
};

enum class Outcome { Unclassified, Collapse, HalfTrained, Success, NotCollapsed };

std::string outcome_name(Outcome o);

struct TrainReport {
  Params params;
  std::vector<double> loss_history;  // per epoch, mean minibatch loss
  Outcome outcome = Outcome::Unclassified;
  bool diverged = false;
};

// m inputs uniform on [-sqrt(3), sqrt(3)]^{d_in} (unit variance per
// coordinate); targets evaluated on them.
Dataset gen_data(TargetFn target, int m, RngStream& rng);

// Dense evaluation grid: `points_per_dim` uniform points per dimension on
// [-sqrt(3), sqrt(3)], with targets.
Dataset make_eval_grid(TargetFn target, int points_per_dim = 401);

// Adam with bias-corrected moments; minibatches drawn by reshuffling the
// dataset every epoch. A NaN/inf epoch loss marks the run diverged and stops
// training instead of throwing.
TrainReport adam_train(Params params, const Dataset& data, const TrainConfig& cfg,
                       RngStream& rng);

// Collapse: stddev(predictions) < 1% of stddev(targets) on the grid.
// For F1 additionally: Success when RMSE < 0.05; HalfTrained when one
// half-line is fit (RMSE < 0.05) while predictions on the other are flat
// (range < 0.05); otherwise NotCollapsed.
Outcome classify_outcome(const Params& params, TargetFn target, const Dataset& eval_grid);

struct OutcomeCounts {
  long long runs = 0;
  long long collapse = 0;
  long long half_trained = 0;
  long long success = 0;
  long long not_collapsed = 0;
  long long diverged = 0;  // subset of not_collapsed

  double proportion(long long count) const {
    return static_cast<double>(count) / static_cast<double>(runs);
  }
  Interval ci(long long count) const { return wilson95(count, runs); }
};

// `runs` independent init+train+classify trials with per-run derived seeds.
OutcomeCounts sweep_train(TargetFn target, const Architecture& arch,
                          const InitScheme& scheme, const TrainConfig& cfg, long long runs,
                          const Rng& rng, unsigned jobs = 1);

struct DeadLimitReport {
  std::vector<double> constant;   // trained network's constant output
  std::vector<double> reference;  // target mean (L2) or coordinatewise median (L1)
  double gap = 0.0;               // max-abs difference between the two
  bool prefix_frozen = false;     // layer-1 parameters bitwise unchanged
  Params params;
};

// Builds a certifiably born-dead net (inputs shifted to the positive orthant,
// layer-1 weights and biases strictly negative), trains it full-batch, and
// compares the resulting constant against the loss-minimizing constant.
DeadLimitReport verify_dead_limit(const Architecture& arch, const Dataset& data,
                                  LossKind kind, const TrainConfig& cfg, RngStream& rng);

}  // namespace relulab
