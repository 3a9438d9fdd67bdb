#include "relulab/init.hpp"

#include <cmath>
#include <stdexcept>

namespace relulab {

namespace {

// Explicit-Q Householder QR of a square matrix A (n x n), overwriting A with Q
// and returning the diagonal of R. Plenty for the tiny layers in scope.
std::vector<double> householder_qr_inplace(Matrix& A) {
  const std::size_t n = A.rows;
  Matrix R = A;
  std::vector<Matrix> reflectors;
  std::vector<double> diag(n, 0.0);

  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += R(i, k) * R(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      diag[k] = 0.0;
      continue;
    }
    const double alpha = R(k, k) > 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = i < k ? 0.0 : R(i, k);
      if (i == k) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 > 0.0) {
      // R <- (I - 2 v v^T / |v|^2) R
      for (std::size_t j = k; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += v[i] * R(i, j);
        const double c = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < n; ++i) R(i, j) -= c * v[i];
      }
      Matrix refl(1, n);
      for (std::size_t i = 0; i < n; ++i) refl(0, i) = v[i] / std::sqrt(vnorm2);
      reflectors.push_back(std::move(refl));
    }
    diag[k] = R(k, k);
  }

  // Q = H_1 H_2 ... H_m (accumulate onto identity).
  Matrix Q(n, n);
  for (std::size_t i = 0; i < n; ++i) Q(i, i) = 1.0;
  for (auto it = reflectors.rbegin(); it != reflectors.rend(); ++it) {
    const double* u = it->row(0);
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += u[i] * Q(i, j);
      const double c = 2.0 * dot;
      for (std::size_t i = 0; i < n; ++i) Q(i, j) -= c * u[i];
    }
  }
  A = std::move(Q);
  return diag;
}

}  // namespace

double sample_beta21(RngStream& rng) { return std::sqrt(rng.uniform()); }

double AsymmetricDist::sample(RngStream& rng) const {
  switch (kind) {
    case Kind::Beta21:
      return sample_beta21(rng);
  }
  throw std::logic_error("AsymmetricDist: unknown kind");
}

double sigma_w_from_moments(double mu1, double mu2) {
  if (mu1 <= 0.0) throw std::domain_error("sigma_w_from_moments: mu1 must be positive");
  if (mu2 <= 0.0 || mu2 >= 1.0)
    throw std::domain_error("sigma_w_from_moments: mu2 must lie in (0, 1)");
  const double pi = std::numbers::pi;
  return std::numbers::sqrt2 * (-mu1 / std::sqrt(pi) + std::sqrt(mu1 * mu1 / pi + 1.0 - mu2));
}

Params he_init(const Architecture& arch, RngStream& rng, double bias_const) {
  Params p = Params::zeros(arch);
  for (int l = 0; l < arch.depth(); ++l) {
    Matrix& W = p.weights[static_cast<std::size_t>(l)];
    const double sd = std::sqrt(2.0 / static_cast<double>(W.cols));
    for (double& w : W.data) w = rng.normal(sd);
    for (double& b : p.biases[static_cast<std::size_t>(l)]) b = bias_const;
  }
  return p;
}

Params symmetric_uniform_init(const Architecture& arch, RngStream& rng, double half_width) {
  if (half_width <= 0.0)
    throw std::invalid_argument("symmetric_uniform_init: half_width must be positive");
  Params p = Params::zeros(arch);
  for (int l = 0; l < arch.depth(); ++l) {
    for (double& w : p.weights[static_cast<std::size_t>(l)].data)
      w = rng.uniform(-half_width, half_width);
    for (double& b : p.biases[static_cast<std::size_t>(l)])
      b = rng.uniform(-half_width, half_width);
  }
  return p;
}

Params bias_free_symmetric_init(const Architecture& arch, RngStream& rng, double stddev) {
  if (stddev <= 0.0)
    throw std::invalid_argument("bias_free_symmetric_init: stddev must be positive");
  Params p = Params::zeros(arch);
  for (int l = 0; l < arch.depth(); ++l)
    for (double& w : p.weights[static_cast<std::size_t>(l)].data) w = rng.normal(stddev);
  return p;
}

Params orthogonal_init(const Architecture& arch, RngStream& rng, double gain) {
  if (gain <= 0.0) throw std::invalid_argument("orthogonal_init: gain must be positive");
  Params p = Params::zeros(arch);
  for (int l = 0; l < arch.depth(); ++l) {
    Matrix& W = p.weights[static_cast<std::size_t>(l)];
    const std::size_t n = std::max(W.rows, W.cols);
    Matrix G(n, n);
    for (double& g : G.data) g = rng.normal();
    const std::vector<double> rdiag = householder_qr_inplace(G);
    // Sign correction makes the factorization unique (R diagonal positive),
    // so Q is Haar-distributed.
    for (std::size_t j = 0; j < n; ++j) {
      if (rdiag[j] < 0.0)
        for (std::size_t i = 0; i < n; ++i) G(i, j) = -G(i, j);
    }
    for (std::size_t i = 0; i < W.rows; ++i)
      for (std::size_t j = 0; j < W.cols; ++j) W(i, j) = gain * G(i, j);
  }
  return p;
}

Params rai_init(const Architecture& arch, RngStream& rng, const RaiInit& cfg, RaiSlots* slots) {
  const int L = arch.depth();
  if (L < 2) throw std::invalid_argument("rai_init: need L >= 2 (no hidden layer to asymmetrize)");
  const double sigma_w = cfg.resolved_sigma_w();
  if (sigma_w <= 0.0) throw std::invalid_argument("rai_init: sigma_w must be positive");

  Params p = Params::zeros(arch);
  if (slots) slots->slot.assign(static_cast<std::size_t>(L - 1), {});

  // Layer 1: He with zero bias (an input can be negative, so the asymmetric
  // slot would not help there).
  {
    Matrix& W = p.weights[0];
    const double sd = std::sqrt(2.0 / static_cast<double>(W.cols));
    for (double& w : W.data) w = rng.normal(sd);
  }

  for (int l = 2; l <= L; ++l) {
    Matrix& W = p.weights[static_cast<std::size_t>(l - 1)];
    std::vector<double>& b = p.biases[static_cast<std::size_t>(l - 1)];
    const std::size_t fan_in = W.cols;  // N_{l-1}
    const double sd = sigma_w / std::sqrt(static_cast<double>(fan_in));
    std::vector<std::size_t>* layer_slots =
        slots ? &slots->slot[static_cast<std::size_t>(l - 2)] : nullptr;
    for (std::size_t j = 0; j < W.rows; ++j) {
      const std::size_t k = rng.index(fan_in + 1);  // slot in [W_j, b_j]
      if (layer_slots) layer_slots->push_back(k);
      for (std::size_t t = 0; t < fan_in; ++t)
        W(j, t) = (t == k) ? cfg.dist.sample(rng) : rng.normal(sd);
      b[j] = (k == fan_in) ? cfg.dist.sample(rng) : rng.normal(sd);
    }
  }
  return p;
}

Params initialize(const Architecture& arch, const InitScheme& scheme, RngStream& rng) {
  return std::visit(
      [&](const auto& s) -> Params {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HeInit>) return he_init(arch, rng, s.bias_const);
        if constexpr (std::is_same_v<T, SymmetricUniformInit>)
          return symmetric_uniform_init(arch, rng, s.half_width);
        if constexpr (std::is_same_v<T, BiasFreeSymmetricInit>)
          return bias_free_symmetric_init(arch, rng, s.stddev);
        if constexpr (std::is_same_v<T, OrthogonalInit>)
          return orthogonal_init(arch, rng, s.gain);
        if constexpr (std::is_same_v<T, RaiInit>) return rai_init(arch, rng, s);
      },
      scheme);
}

std::string scheme_name(const InitScheme& scheme) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HeInit>) return "he";
        if constexpr (std::is_same_v<T, SymmetricUniformInit>) return "sym-uniform";
        if constexpr (std::is_same_v<T, BiasFreeSymmetricInit>) return "bias-free-sym";
        if constexpr (std::is_same_v<T, OrthogonalInit>) return "orthogonal";
        if constexpr (std::is_same_v<T, RaiInit>) return "rai";
      },
      scheme);
}

}  // namespace relulab
