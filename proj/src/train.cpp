#include "relulab/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "relulab/bdp.hpp"
#include "relulab/parallel.hpp"

namespace relulab {

namespace {
constexpr double kDataHalfWidth = 1.7320508075688772;  // sqrt(3), unit variance
}

int target_input_dim(TargetFn t) { return t == TargetFn::F4 ? 2 : 1; }
int target_output_dim(TargetFn t) { return t == TargetFn::F4 ? 2 : 1; }

std::vector<double> eval_target(TargetFn t, std::span<const double> x) {
  switch (t) {
    case TargetFn::F1:
      return {std::fabs(x[0])};
    case TargetFn::F2:
      return {x[0] * std::sin(5.0 * x[0])};
    case TargetFn::F3:
      return {(x[0] > 0.0 ? 1.0 : 0.0) + 0.2 * std::sin(5.0 * x[0])};
    case TargetFn::F4:
      return {std::fabs(x[0] + x[1]), std::fabs(x[0] - x[1])};
  }
  throw std::logic_error("eval_target: unknown target");
}

std::string target_name(TargetFn t) {
  switch (t) {
    case TargetFn::F1: return "f1";
    case TargetFn::F2: return "f2";
    case TargetFn::F3: return "f3";
    case TargetFn::F4: return "f4";
  }
  return "?";
}

TargetFn target_from_name(const std::string& name) {
  if (name == "f1") return TargetFn::F1;
  if (name == "f2") return TargetFn::F2;
  if (name == "f3") return TargetFn::F3;
  if (name == "f4") return TargetFn::F4;
  throw std::invalid_argument("unknown target: " + name);
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Unclassified: return "Unclassified";
    case Outcome::Collapse: return "Collapse";
    case Outcome::HalfTrained: return "HalfTrained";
    case Outcome::Success: return "Success";
    case Outcome::NotCollapsed: return "NotCollapsed";
  }
  return "?";
}

Dataset gen_data(TargetFn target, int m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("gen_data: m must be >= 1");
  const int d = target_input_dim(target);
  Dataset data;
  data.radius = kDataHalfWidth * std::sqrt(static_cast<double>(d));
  data.inputs.reserve(static_cast<std::size_t>(m));
  data.targets.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (double& c : x) c = rng.uniform(-kDataHalfWidth, kDataHalfWidth);
    data.targets.push_back(eval_target(target, x));
    data.inputs.push_back(std::move(x));
  }
  return data;
}

Dataset make_eval_grid(TargetFn target, int points_per_dim) {
  if (points_per_dim < 2) throw std::invalid_argument("make_eval_grid: need >= 2 points");
  const int d = target_input_dim(target);
  Dataset grid;
  grid.radius = kDataHalfWidth * std::sqrt(static_cast<double>(d));
  auto coord = [&](int i) {
    return -kDataHalfWidth +
           2.0 * kDataHalfWidth * static_cast<double>(i) / static_cast<double>(points_per_dim - 1);
  };
  if (d == 1) {
    for (int i = 0; i < points_per_dim; ++i) {
      std::vector<double> x{coord(i)};
      grid.targets.push_back(eval_target(target, x));
      grid.inputs.push_back(std::move(x));
    }
  } else {
    for (int i = 0; i < points_per_dim; ++i)
      for (int j = 0; j < points_per_dim; ++j) {
        std::vector<double> x{coord(i), coord(j)};
        grid.targets.push_back(eval_target(target, x));
        grid.inputs.push_back(std::move(x));
      }
  }
  return grid;
}

TrainReport adam_train(Params params, const Dataset& data, const TrainConfig& cfg,
                       RngStream& rng) {
  if (!data.has_targets()) throw std::invalid_argument("adam_train: dataset has no targets");
  params.validate();
  if (cfg.batch_size < 1 || cfg.batch_size > static_cast<int>(data.size()))
    throw std::invalid_argument("adam_train: batch_size must be in [1, m]");
  if (cfg.learning_rate < 0.0 || cfg.beta1 < 0.0 || cfg.beta1 >= 1.0 || cfg.beta2 < 0.0 ||
      cfg.beta2 >= 1.0 || cfg.eps <= 0.0)
    throw std::invalid_argument("adam_train: bad optimizer constants");

  TrainReport report;
  report.loss_history.reserve(static_cast<std::size_t>(cfg.epochs));

  Grads grad = Grads::zeros_like(params);
  Grads m1 = Grads::zeros_like(params);
  Grads m2 = Grads::zeros_like(params);
  NetScratch scratch;
  scratch.resize(params);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 shuffle_gen(rng.substream(0x5F1E).seed());

  const std::size_t L = params.weights.size();
  long long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_gen);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const double w = 1.0 / static_cast<double>(end - start);
      grad.set_zero();
      for (std::size_t i = start; i < end; ++i)
        epoch_loss += backprop_sample(params, data.inputs[order[i]], data.targets[order[i]],
                                      cfg.loss, w, grad, scratch);
      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t l = 0; l < L; ++l) {
        auto update = [&](double& p, double& m, double& v, double g) {
          m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
          v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
          p -= cfg.learning_rate * (m / c1) / (std::sqrt(v / c2) + cfg.eps);
        };
        Matrix& W = params.weights[l];
        for (std::size_t k = 0; k < W.data.size(); ++k)
          update(W.data[k], m1.weights[l].data[k], m2.weights[l].data[k], grad.weights[l].data[k]);
        std::vector<double>& b = params.biases[l];
        for (std::size_t k = 0; k < b.size(); ++k)
          update(b[k], m1.biases[l][k], m2.biases[l][k], grad.biases[l][k]);
      }
    }
    epoch_loss /= static_cast<double>(data.size());
    report.loss_history.push_back(epoch_loss);
    if (!std::isfinite(epoch_loss)) {
      report.diverged = true;
      break;
    }
  }
  report.params = std::move(params);
  return report;
}

namespace {

// Joint spread over all output coordinates: sqrt(mean |p_i - mean(p)|^2).
double spread(const std::vector<std::vector<double>>& values) {
  if (values.empty()) return 0.0;
  const std::size_t d = values.front().size();
  std::vector<double> center(d, 0.0);
  for (const auto& v : values)
    for (std::size_t k = 0; k < d; ++k) center[k] += v[k];
  for (double& c : center) c /= static_cast<double>(values.size());
  double acc = 0.0;
  for (const auto& v : values)
    for (std::size_t k = 0; k < d; ++k) acc += (v[k] - center[k]) * (v[k] - center[k]);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace

Outcome classify_outcome(const Params& params, TargetFn target, const Dataset& eval_grid) {
  if (!eval_grid.has_targets())
    throw std::invalid_argument("classify_outcome: eval grid has no targets");
  const std::size_t m = eval_grid.size();
  std::vector<std::vector<double>> pred(m);
  for (std::size_t i = 0; i < m; ++i) pred[i] = forward(params, eval_grid.inputs[i]);

  if (spread(pred) < 0.01 * spread(eval_grid.targets)) return Outcome::Collapse;

  if (target != TargetFn::F1) return Outcome::NotCollapsed;

  auto rmse_over = [&](auto keep) {
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!keep(eval_grid.inputs[i][0])) continue;
      const double d = pred[i][0] - eval_grid.targets[i][0];
      acc += d * d;
      ++n;
    }
    return n == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n));
  };
  auto range_over = [&](auto keep) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (!keep(eval_grid.inputs[i][0])) continue;
      const double v = pred[i][0];
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
    return hi - lo;
  };

  constexpr double kFitRmse = 0.05;
  if (rmse_over([](double) { return true; }) < kFitRmse) return Outcome::Success;
  const bool right_fit = rmse_over([](double x) { return x >= 0.0; }) < kFitRmse &&
                         range_over([](double x) { return x <= 0.0; }) < kFitRmse;
  const bool left_fit = rmse_over([](double x) { return x <= 0.0; }) < kFitRmse &&
                        range_over([](double x) { return x >= 0.0; }) < kFitRmse;
  if (right_fit || left_fit) return Outcome::HalfTrained;
  return Outcome::NotCollapsed;
}

OutcomeCounts sweep_train(TargetFn target, const Architecture& arch,
                          const InitScheme& scheme, const TrainConfig& cfg, long long runs,
                          const Rng& rng, unsigned jobs) {
  if (runs < 1) throw std::invalid_argument("sweep_train: runs must be >= 1");
  if (arch.input_dim() != target_input_dim(target) ||
      arch.output_dim() != target_output_dim(target))
    throw std::invalid_argument("sweep_train: architecture does not match target dims");

  const Dataset eval_grid = make_eval_grid(target);
  std::atomic<long long> collapse{0}, half{0}, success{0}, not_collapsed{0}, diverged{0};

  parallel_for(static_cast<std::size_t>(runs), jobs, [&](std::size_t r) {
    RngStream run = rng.trial_stream(r);
    RngStream init_rng = run.substream(1);
    RngStream data_rng = run.substream(2);
    RngStream shuffle_rng = run.substream(3);
    const Params p0 = initialize(arch, scheme, init_rng);
    const Dataset data = gen_data(target, cfg.train_points, data_rng);
    TrainReport rep = adam_train(p0, data, cfg, shuffle_rng);
    const Outcome o = classify_outcome(rep.params, target, eval_grid);
    if (rep.diverged) diverged.fetch_add(1, std::memory_order_relaxed);
    switch (o) {
      case Outcome::Collapse: collapse.fetch_add(1, std::memory_order_relaxed); break;
      case Outcome::HalfTrained: half.fetch_add(1, std::memory_order_relaxed); break;
      case Outcome::Success: success.fetch_add(1, std::memory_order_relaxed); break;
      default: not_collapsed.fetch_add(1, std::memory_order_relaxed); break;
    }
  });

  OutcomeCounts counts;
  counts.runs = runs;
  counts.collapse = collapse.load();
  counts.half_trained = half.load();
  counts.success = success.load();
  counts.not_collapsed = not_collapsed.load();
  counts.diverged = diverged.load();
  return counts;
}

DeadLimitReport verify_dead_limit(const Architecture& arch, const Dataset& data,
                                  LossKind kind, const TrainConfig& cfg, RngStream& rng) {
  if (!data.has_targets()) throw std::invalid_argument("verify_dead_limit: need targets");
  if (arch.input_dim() != data.input_dim() || arch.output_dim() != data.target_dim())
    throw std::invalid_argument("verify_dead_limit: architecture/dataset mismatch");
  if (arch.depth() < 2)
    throw std::invalid_argument("verify_dead_limit: need a hidden layer (L >= 2)");

  // Shift inputs into the strictly positive orthant; with all-negative
  // layer-1 rows this forces phi(N^1) = 0 on every input.
  Dataset shifted = data;
  const int d = data.input_dim();
  for (int k = 0; k < d; ++k) {
    double lo = shifted.inputs.front()[static_cast<std::size_t>(k)];
    for (const auto& x : shifted.inputs) lo = std::min(lo, x[static_cast<std::size_t>(k)]);
    for (auto& x : shifted.inputs) x[static_cast<std::size_t>(k)] += 0.5 - lo;
  }
  shifted.radius = 0.0;
  for (const auto& x : shifted.inputs) {
    double n2 = 0.0;
    for (double c : x) n2 += c * c;
    shifted.radius = std::max(shifted.radius, std::sqrt(n2));
  }

  Params params = he_init(arch, rng, 0.0);
  for (double& w : params.weights[0].data) w = -std::fabs(rng.normal()) - 0.1;
  for (double& b : params.biases[0]) b = -std::fabs(rng.normal()) - 0.1;

  const DeadCheck check = is_born_dead(params, shifted);
  if (!check.dead || check.layer != 1)
    throw std::logic_error("verify_dead_limit: constructed net is not dead at layer 1");

  const Matrix w1_before = params.weights[0];
  const std::vector<double> b1_before = params.biases[0];

  TrainConfig full_batch = cfg;
  full_batch.loss = kind;
  full_batch.batch_size = static_cast<int>(shifted.size());
  RngStream shuffle_rng = rng.substream(7);
  TrainReport rep = adam_train(std::move(params), shifted, full_batch, shuffle_rng);

  DeadLimitReport out;
  out.constant = forward(rep.params, shifted.inputs.front());
  const std::size_t dout = static_cast<std::size_t>(arch.output_dim());
  out.reference.resize(dout);
  if (kind == LossKind::L2) {
    for (const auto& y : shifted.targets)
      for (std::size_t k = 0; k < dout; ++k) out.reference[k] += y[k];
    for (double& v : out.reference) v /= static_cast<double>(shifted.size());
  } else {
    std::vector<double> col(shifted.size());
    for (std::size_t k = 0; k < dout; ++k) {
      for (std::size_t i = 0; i < shifted.size(); ++i) col[i] = shifted.targets[i][k];
      std::sort(col.begin(), col.end());
      const std::size_t mid = col.size() / 2;
      out.reference[k] =
          col.size() % 2 == 1 ? col[mid] : 0.5 * (col[mid - 1] + col[mid]);
    }
  }
  out.gap = 0.0;
  for (std::size_t k = 0; k < dout; ++k)
    out.gap = std::max(out.gap, std::fabs(out.constant[k] - out.reference[k]));
  out.prefix_frozen =
      rep.params.weights[0] == w1_before && rep.params.biases[0] == b1_before;
  out.params = std::move(rep.params);
  return out;
}

}  // namespace relulab
