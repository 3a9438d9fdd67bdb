#pragma once

#include <span>
#include <vector>

#include "relulab/types.hpp"

namespace relulab {

enum class LossKind { L2, L1 };

// Elementwise max(v_i, 0). Zeros in the output are exact IEEE zeros.
std::vector<double> relu(const std::vector<double>& v);

// N^L(x) for the recursion N^1 = W^1 x + b^1, N^l = W^l phi(N^{l-1}) + b^l.
std::vector<double> forward(const Params& params, std::span<const double> x);

// Forward pass keeping all pre/post activations. output matches forward() bitwise.
ActivationTrace forward_trace(const Params& params, std::span<const double> x);

// L2: squared Euclidean distance. L1: sum of absolute differences.
double loss(std::span<const double> pred, std::span<const double> target, LossKind kind);

// Mean loss over the dataset.
double batch_loss(const Params& params, const Dataset& data, LossKind kind);

// Gradient holder shaped like Params.
struct Grads {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  static Grads zeros_like(const Params& p);
  void set_zero();
};

// Reusable buffers for repeated backprop calls (training loops).
struct NetScratch {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
  std::vector<std::vector<double>> delta;
  void resize(const Params& params);
};

// Accumulate d(weight * sample_loss)/d(theta) into acc; returns the sample loss.
// ReLU subgradient at exactly 0 is 0, so an all-zero hidden layer stops the
// backward pass exactly (dead-prefix gradients are exact zeros).
double backprop_sample(const Params& params, std::span<const double> x,
                       std::span<const double> y, LossKind kind, double weight,
                       Grads& acc, NetScratch& scratch);

// Gradient of the mean loss over the whole dataset.
Grads backprop(const Params& params, const Dataset& data, LossKind kind);

// Gradient of the mean loss over data[indices].
Grads backprop(const Params& params, const Dataset& data,
               std::span<const std::size_t> indices, LossKind kind);

}  // namespace relulab
