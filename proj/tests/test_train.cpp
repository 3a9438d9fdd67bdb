#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "relulab/bdp.hpp"
#include "relulab/init.hpp"
#include "relulab/train.hpp"

using namespace relulab;

namespace {

Params abs_net() {
  Params p = Params::zeros(Architecture({1, 2, 1}));
  p.weights[0](0, 0) = 1.0;
  p.weights[0](1, 0) = -1.0;
  p.weights[1](0, 0) = 1.0;
  p.weights[1](0, 1) = 1.0;
  return p;
}

Params relu_arm_net() {
  // computes ReLU(x): fits f1 on x >= 0, flat zero on x <= 0
  Params p = Params::zeros(Architecture({1, 2, 1}));
  p.weights[0](0, 0) = 1.0;
  p.weights[0](1, 0) = 1.0;
  p.weights[1](0, 0) = 1.0;
  return p;
}

// Least-squares solution for the affine model y = w x + b on 1-D data,
// solved through the 2x2 normal equations.
std::pair<double, double> least_squares_1d(const Dataset& d) {
  double sxx = 0.0, sx = 0.0, sxy = 0.0, sy = 0.0;
  const double n = static_cast<double>(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.inputs[i][0], y = d.targets[i][0];
    sxx += x * x;
    sx += x;
    sxy += x * y;
    sy += y;
  }
  const double det = sxx * n - sx * sx;
  return {(sxy * n - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

}  // namespace

TEST_CASE("target definitions") {
  CHECK(eval_target(TargetFn::F1, std::vector<double>{-0.5})[0] == 0.5);
  CHECK(eval_target(TargetFn::F2, std::vector<double>{0.4})[0] ==
        doctest::Approx(0.4 * std::sin(2.0)).epsilon(1e-15));
  CHECK(eval_target(TargetFn::F3, std::vector<double>{-0.2})[0] ==
        doctest::Approx(0.2 * std::sin(-1.0)).epsilon(1e-15));
  CHECK(eval_target(TargetFn::F3, std::vector<double>{0.2})[0] ==
        doctest::Approx(1.0 + 0.2 * std::sin(1.0)).epsilon(1e-15));
  const auto f4 = eval_target(TargetFn::F4, std::vector<double>{1.0, 1.0});
  CHECK(f4 == std::vector<double>{2.0, 0.0});
  CHECK(target_input_dim(TargetFn::F4) == 2);
  CHECK(target_from_name("f3") == TargetFn::F3);
  CHECK_THROWS_AS(target_from_name("f9"), std::invalid_argument);
}

TEST_CASE("gen_data: unit variance inputs, targets evaluated on them") {
  RngStream rng(12);
  const Dataset d = gen_data(TargetFn::F1, 100000, rng);
  REQUIRE(d.size() == 100000);
  double m = 0.0, v = 0.0;
  for (const auto& x : d.inputs) m += x[0];
  m /= static_cast<double>(d.size());
  for (const auto& x : d.inputs) v += (x[0] - m) * (x[0] - m);
  v /= static_cast<double>(d.size() - 1);
  // Var(U[-sqrt3, sqrt3]) = 1; se of the sample variance ~ sqrt(2/n)
  CHECK(std::fabs(v - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(d.size())));
  for (std::size_t i = 0; i < 50; ++i)
    CHECK(d.targets[i][0] == std::fabs(d.inputs[i][0]));
}

TEST_CASE("adam full-batch reaches the least-squares optimum of a linear model") {
  RngStream rng(31);
  Dataset d;
  d.radius = 2.0;
  for (int i = 0; i < 60; ++i) {
    const double x = rng.uniform(-1.5, 1.5);
    d.inputs.push_back({x});
    d.targets.push_back({0.7 * x - 0.3 + 0.05 * rng.normal()});
  }
  Params p = Params::zeros(Architecture({1, 1}));  // single affine layer
  TrainConfig cfg;
  cfg.epochs = 4000;
  cfg.batch_size = static_cast<int>(d.size());
  RngStream t(32);
  const TrainReport rep = adam_train(p, d, cfg, t);
  const auto [w_star, b_star] = least_squares_1d(d);
  CHECK(rep.params.weights[0](0, 0) == doctest::Approx(w_star).epsilon(1e-3));
  CHECK(rep.params.biases[0][0] == doctest::Approx(b_star).epsilon(1e-3));
  CHECK(rep.loss_history.back() < rep.loss_history.front());
}

TEST_CASE("zero learning rate leaves params bitwise unchanged") {
  RngStream rng(55);
  const Architecture arch({1, 3, 1});
  const Params p0 = he_init(arch, rng, 0.0);
  Dataset d;
  d.inputs = {{0.1}, {-0.4}, {0.9}};
  d.targets = {{0.1}, {0.4}, {0.9}};
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 3;
  cfg.learning_rate = 0.0;
  RngStream t(56);
  const TrainReport rep = adam_train(p0, d, cfg, t);
  CHECK(rep.params == p0);
}

TEST_CASE("born-dead start trains toward the target variance floor (L2)") {
  const Architecture arch = Architecture::constant_width(1, 2, 6, 1);
  RngStream rng(61);
  Params p = he_init(arch, rng, 0.0);
  // kill the net at layer 1 on positive data
  for (double& w : p.weights[0].data) w = -std::fabs(w) - 0.5;
  for (double& b : p.biases[0]) b = -0.5;
  Dataset d;
  d.radius = 3.0;
  RngStream dr(62);
  for (int i = 0; i < 128; ++i) {
    const double x = dr.uniform(0.2, 2.2);  // positive orthant
    d.inputs.push_back({x});
    d.targets.push_back({std::sin(3.0 * x)});
  }
  REQUIRE(is_born_dead(p, d).dead);

  double target_mean = 0.0;
  for (const auto& y : d.targets) target_mean += y[0];
  target_mean /= static_cast<double>(d.size());
  double target_var = 0.0;
  for (const auto& y : d.targets) target_var += (y[0] - target_mean) * (y[0] - target_mean);
  target_var /= static_cast<double>(d.size());

  TrainConfig cfg;
  cfg.epochs = 3000;
  cfg.batch_size = static_cast<int>(d.size());
  RngStream t(63);
  const TrainReport rep = adam_train(p, d, cfg, t);
  CHECK(std::fabs(rep.loss_history.back() - target_var) < 1e-2);
  // output stayed constant
  const auto o1 = forward(rep.params, d.inputs[0]);
  const auto o2 = forward(rep.params, d.inputs[77]);
  CHECK(o1[0] == doctest::Approx(o2[0]).epsilon(1e-12));
  CHECK(o1[0] == doctest::Approx(target_mean).epsilon(1e-2));
}

TEST_CASE("once born dead, every adam step stays dead") {
  const Architecture arch = Architecture::constant_width(1, 2, 5, 1);
  RngStream rng(71);
  Params p = he_init(arch, rng, 0.0);
  for (double& w : p.weights[0].data) w = -std::fabs(w) - 0.5;
  for (double& b : p.biases[0]) b = -0.5;
  Dataset d;
  d.radius = 2.0;
  RngStream dr(72);
  for (int i = 0; i < 16; ++i) {
    const double x = dr.uniform(0.1, 1.9);
    d.inputs.push_back({x});
    d.targets.push_back({x * x});
  }
  REQUIRE(is_born_dead(p, d).dead);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 16;
  Params cur = p;
  for (int step = 0; step < 50; ++step) {
    RngStream t(mix_seed(73, static_cast<std::uint64_t>(step)));
    cur = adam_train(cur, d, cfg, t).params;
    CHECK(is_born_dead(cur, d).dead);
  }
}

TEST_CASE("classifier outcomes on constructed nets") {
  const Dataset grid = make_eval_grid(TargetFn::F1, 401);
  CHECK(classify_outcome(Params::zeros(Architecture({1, 2, 1})), TargetFn::F1, grid) ==
        Outcome::Collapse);
  CHECK(classify_outcome(abs_net(), TargetFn::F1, grid) == Outcome::Success);
  CHECK(classify_outcome(relu_arm_net(), TargetFn::F1, grid) == Outcome::HalfTrained);

  // a plainly wrong but non-constant net
  Params skew = abs_net();
  skew.weights[1](0, 1) = -2.0;  // f(x) = relu(x) - 2 relu(-x)
  CHECK(classify_outcome(skew, TargetFn::F1, grid) == Outcome::NotCollapsed);

  const Dataset grid2 = make_eval_grid(TargetFn::F2, 401);
  CHECK(classify_outcome(Params::zeros(Architecture({1, 2, 1})), TargetFn::F2, grid2) ==
        Outcome::Collapse);
  CHECK(classify_outcome(abs_net(), TargetFn::F2, grid2) == Outcome::NotCollapsed);
}

TEST_CASE("classifier is deterministic") {
  const Dataset grid = make_eval_grid(TargetFn::F1, 101);
  RngStream rng(81);
  const Params p = he_init(Architecture::constant_width(1, 2, 10, 1), rng, 0.0);
  const Outcome a = classify_outcome(p, TargetFn::F1, grid);
  const Outcome b = classify_outcome(p, TargetFn::F1, grid);
  CHECK(a == b);
}

TEST_CASE("sweep_train smoke: counts add up and match a serial rerun") {
  const Architecture arch = Architecture::constant_width(1, 2, 4, 1);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.train_points = 128;
  cfg.batch_size = 64;
  const OutcomeCounts a = sweep_train(TargetFn::F1, arch, HeInit{}, cfg, 10, Rng{90}, 2);
  CHECK(a.runs == 10);
  CHECK(a.collapse + a.half_trained + a.success + a.not_collapsed == a.runs);
  const OutcomeCounts b = sweep_train(TargetFn::F1, arch, HeInit{}, cfg, 10, Rng{90}, 1);
  CHECK(a.collapse == b.collapse);
  CHECK(a.half_trained == b.half_trained);
  CHECK(a.success == b.success);
  const Interval ci = a.ci(a.collapse);
  CHECK(ci.low <= a.proportion(a.collapse));
  CHECK(a.proportion(a.collapse) <= ci.high);
}

TEST_CASE("verify_dead_limit: L2 goes to the mean, L1 to the median, prefix frozen") {
  const Architecture arch = Architecture::constant_width(1, 2, 4, 1);
  Dataset d;
  d.radius = 1.0;
  d.inputs = {{0.1}, {0.5}, {0.9}};
  d.targets = {{0.0}, {2.0}, {4.0}};
  TrainConfig cfg;
  cfg.epochs = 20000;
  cfg.learning_rate = 2e-4;
  RngStream rng(101);
  const DeadLimitReport l2 = verify_dead_limit(arch, d, LossKind::L2, cfg, rng);
  CHECK(l2.reference[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(l2.gap < 1e-3);
  CHECK(l2.prefix_frozen);

  Dataset d1;
  d1.radius = 1.0;
  d1.inputs = {{0.2}, {0.4}, {0.6}};
  d1.targets = {{0.0}, {0.0}, {10.0}};
  RngStream rng2(102);
  const DeadLimitReport l1 = verify_dead_limit(arch, d1, LossKind::L1, cfg, rng2);
  CHECK(l1.reference[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(l1.gap < 1e-2);
  CHECK(l1.prefix_frozen);
}
