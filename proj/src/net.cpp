#include "relulab/net.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace relulab {

namespace {

void affine(const Matrix& W, const std::vector<double>& b, std::span<const double> in,
            std::vector<double>& out) {
  out.resize(W.rows);
  for (std::size_t i = 0; i < W.rows; ++i) {
    const double* w = W.row(i);
    double acc = b[i];
    for (std::size_t j = 0; j < W.cols; ++j) acc += w[j] * in[j];
    out[i] = acc;
  }
}

void relu_into(const std::vector<double>& in, std::vector<double>& out) {
  out.resize(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

void check_input(const Params& params, std::span<const double> x) {
  if (x.size() != params.weights.front().cols)
    throw std::invalid_argument("forward: input length does not match d_in");
}

}  // namespace

std::vector<double> relu(const std::vector<double>& v) {
  std::vector<double> out;
  relu_into(v, out);
  return out;
}

std::vector<double> forward(const Params& params, std::span<const double> x) {
  check_input(params, x);
  const int L = params.layer_count();
  std::vector<double> cur, act;
  affine(params.weights[0], params.biases[0], x, cur);
  for (int l = 1; l < L; ++l) {
    relu_into(cur, act);
    affine(params.weights[static_cast<std::size_t>(l)],
           params.biases[static_cast<std::size_t>(l)], act, cur);
  }
  return cur;
}

ActivationTrace forward_trace(const Params& params, std::span<const double> x) {
  check_input(params, x);
  const int L = params.layer_count();
  ActivationTrace t;
  t.pre.resize(static_cast<std::size_t>(L));
  t.post.resize(static_cast<std::size_t>(L > 0 ? L - 1 : 0));
  affine(params.weights[0], params.biases[0], x, t.pre[0]);
  for (int l = 1; l < L; ++l) {
    relu_into(t.pre[static_cast<std::size_t>(l - 1)], t.post[static_cast<std::size_t>(l - 1)]);
    affine(params.weights[static_cast<std::size_t>(l)],
           params.biases[static_cast<std::size_t>(l)],
           t.post[static_cast<std::size_t>(l - 1)], t.pre[static_cast<std::size_t>(l)]);
  }
  t.output = t.pre.back();
  return t;
}

double loss(std::span<const double> pred, std::span<const double> target, LossKind kind) {
  if (pred.size() != target.size())
    throw std::invalid_argument("loss: pred/target length mismatch");
  double acc = 0.0;
  if (kind == LossKind::L2) {
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double d = pred[i] - target[i];
      acc += d * d;
    }
  } else {
    for (std::size_t i = 0; i < pred.size(); ++i) acc += std::fabs(pred[i] - target[i]);
  }
  return acc;
}

double batch_loss(const Params& params, const Dataset& data, LossKind kind) {
  if (!data.has_targets()) throw std::invalid_argument("batch_loss: dataset has no targets");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    acc += loss(forward(params, data.inputs[i]), data.targets[i], kind);
  return acc / static_cast<double>(data.size());
}

Grads Grads::zeros_like(const Params& p) {
  Grads g;
  g.weights.reserve(p.weights.size());
  g.biases.reserve(p.biases.size());
  for (const auto& w : p.weights) g.weights.emplace_back(w.rows, w.cols);
  for (const auto& b : p.biases) g.biases.emplace_back(b.size(), 0.0);
  return g;
}

void Grads::set_zero() {
  for (auto& w : weights) w.set_zero();
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

void NetScratch::resize(const Params& params) {
  const std::size_t L = params.weights.size();
  pre.resize(L);
  post.resize(L > 0 ? L - 1 : 0);
  delta.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    pre[l].resize(params.weights[l].rows);
    delta[l].resize(params.weights[l].rows);
    if (l + 1 < L) post[l].resize(params.weights[l].rows);
  }
}

double backprop_sample(const Params& params, std::span<const double> x,
                       std::span<const double> y, LossKind kind, double weight,
                       Grads& acc, NetScratch& s) {
  check_input(params, x);
  const int L = params.layer_count();
  const std::size_t Lz = static_cast<std::size_t>(L);

  affine(params.weights[0], params.biases[0], x, s.pre[0]);
  for (int l = 1; l < L; ++l) {
    relu_into(s.pre[static_cast<std::size_t>(l - 1)], s.post[static_cast<std::size_t>(l - 1)]);
    affine(params.weights[static_cast<std::size_t>(l)],
           params.biases[static_cast<std::size_t>(l)],
           s.post[static_cast<std::size_t>(l - 1)], s.pre[static_cast<std::size_t>(l)]);
  }

  const std::vector<double>& out = s.pre[Lz - 1];
  if (out.size() != y.size()) throw std::invalid_argument("backprop: target length mismatch");

  double sample_loss = 0.0;
  std::vector<double>& dout = s.delta[Lz - 1];
  if (kind == LossKind::L2) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double d = out[i] - y[i];
      sample_loss += d * d;
      dout[i] = 2.0 * d;
    }
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double d = out[i] - y[i];
      sample_loss += std::fabs(d);
      dout[i] = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    }
  }

  for (int l = L - 1; l >= 0; --l) {
    const std::size_t lz = static_cast<std::size_t>(l);
    const Matrix& W = params.weights[lz];
    const std::vector<double>& dl = s.delta[lz];
    std::span<const double> in = (l == 0) ? x : std::span<const double>(s.post[lz - 1]);

    Matrix& gW = acc.weights[lz];
    std::vector<double>& gb = acc.biases[lz];
    for (std::size_t i = 0; i < W.rows; ++i) {
      const double di = weight * dl[i];
      if (di == 0.0) continue;
      double* grow = gW.row(i);
      for (std::size_t j = 0; j < W.cols; ++j) grow[j] += di * in[j];
      gb[i] += di;
    }

    if (l == 0) break;
    std::vector<double>& dprev = s.delta[lz - 1];
    const std::vector<double>& pre_prev = s.pre[lz - 1];
    for (std::size_t j = 0; j < W.cols; ++j) {
      if (pre_prev[j] > 0.0) {
        double accj = 0.0;
        for (std::size_t i = 0; i < W.rows; ++i) accj += W(i, j) * dl[i];
        dprev[j] = accj;
      } else {
        dprev[j] = 0.0;  // subgradient 0 at and below the kink
      }
    }
  }
  return sample_loss;
}

Grads backprop(const Params& params, const Dataset& data, LossKind kind) {
  std::vector<std::size_t> idx(data.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return backprop(params, data, idx, kind);
}

Grads backprop(const Params& params, const Dataset& data,
               std::span<const std::size_t> indices, LossKind kind) {
  if (!data.has_targets()) throw std::invalid_argument("backprop: dataset has no targets");
  if (indices.empty()) throw std::invalid_argument("backprop: empty batch");
  Grads g = Grads::zeros_like(params);
  NetScratch s;
  s.resize(params);
  const double w = 1.0 / static_cast<double>(indices.size());
  for (std::size_t i : indices)
    backprop_sample(params, data.inputs[i], data.targets[i], kind, w, g, s);
  return g;
}

}  // namespace relulab
