#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace relulab {

// Dense row-major matrix. Networks in scope are tiny, so no blocking/sparsity.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  void set_zero() { std::fill(data.begin(), data.end(), 0.0); }

  bool operator==(const Matrix&) const = default;
};

// Layer widths [N0, N1, ..., NL]; N0 = input dim, NL = output dim.
struct Architecture {
  std::vector<int> widths;

  Architecture() = default;
  explicit Architecture(std::vector<int> w) : widths(std::move(w)) { validate(); }

  // Number of layers L (affine maps), >= 1.
  int depth() const { return static_cast<int>(widths.size()) - 1; }
  int input_dim() const { return widths.front(); }
  int output_dim() const { return widths.back(); }

  // Width of layer l, 1-based (layer 0 = input).
  int width(int l) const { return widths[static_cast<std::size_t>(l)]; }

  void validate() const {
    if (widths.size() < 2)
      throw std::invalid_argument("Architecture: need at least [d_in, d_out]");
    for (int w : widths)
      if (w < 1) throw std::invalid_argument("Architecture: all widths must be >= 1");
  }

  // Constant-width network: [d_in, N, ..., N, d_out] with `layers` affine maps.
  static Architecture constant_width(int d_in, int hidden, int layers, int d_out) {
    if (layers < 1) throw std::invalid_argument("Architecture: layers must be >= 1");
    std::vector<int> w;
    w.reserve(static_cast<std::size_t>(layers) + 1);
    w.push_back(d_in);
    for (int l = 1; l < layers; ++l) w.push_back(hidden);
    w.push_back(d_out);
    return Architecture(std::move(w));
  }

  bool operator==(const Architecture&) const = default;
};

// Per-layer weight matrices and bias vectors. weights[l] has shape
// N_{l+1} x N_l against the architecture's widths (0-based storage of the
// 1-based layers).
struct Params {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  int layer_count() const { return static_cast<int>(weights.size()); }

  Architecture architecture() const {
    std::vector<int> w;
    w.reserve(weights.size() + 1);
    if (weights.empty()) throw std::invalid_argument("Params: empty");
    w.push_back(static_cast<int>(weights.front().cols));
    for (const auto& m : weights) w.push_back(static_cast<int>(m.rows));
    return Architecture(std::move(w));
  }

  void validate() const {
    if (weights.empty() || weights.size() != biases.size())
      throw std::invalid_argument("Params: weights/biases layer count mismatch");
    for (std::size_t l = 0; l < weights.size(); ++l) {
      if (biases[l].size() != weights[l].rows)
        throw std::invalid_argument("Params: bias length mismatch at layer " +
                                    std::to_string(l + 1));
      if (l + 1 < weights.size() && weights[l + 1].cols != weights[l].rows)
        throw std::invalid_argument("Params: weight shapes inconsistent at layer " +
                                    std::to_string(l + 1));
    }
  }

  static Params zeros(const Architecture& arch) {
    Params p;
    const int L = arch.depth();
    p.weights.reserve(static_cast<std::size_t>(L));
    p.biases.reserve(static_cast<std::size_t>(L));
    for (int l = 1; l <= L; ++l) {
      p.weights.emplace_back(static_cast<std::size_t>(arch.width(l)),
                             static_cast<std::size_t>(arch.width(l - 1)));
      p.biases.emplace_back(static_cast<std::size_t>(arch.width(l)), 0.0);
    }
    return p;
  }

  bool operator==(const Params&) const = default;
};

// Per-layer forward pass record. pre[l] holds N^{l+1}(x) (0-based), post[l]
// the hidden post-activations phi(N^{l+1}(x)); output == pre.back().
struct ActivationTrace {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
  std::vector<double> output;
};

// Input points (and optional targets); all inputs lie in the closed ball of
// the recorded radius.
struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;
  double radius = 0.0;

  std::size_t size() const { return inputs.size(); }
  bool has_targets() const { return !targets.empty(); }
  int input_dim() const {
    return inputs.empty() ? 0 : static_cast<int>(inputs.front().size());
  }
  int target_dim() const {
    return targets.empty() ? 0 : static_cast<int>(targets.front().size());
  }
};

}  // namespace relulab
