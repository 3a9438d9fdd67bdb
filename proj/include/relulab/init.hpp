#pragma once

#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "relulab/rng.hpp"
#include "relulab/types.hpp"

namespace relulab {

// Nonnegative distribution for the asymmetric slot of RAI rows.
// Currently Beta(2,1): density 2x on [0,1], mu1' = 2/3, mu2' = 1/2.
struct AsymmetricDist {
  enum class Kind { Beta21 };
  Kind kind = Kind::Beta21;

  double max_value() const { return 1.0; }  // M
  double mu1() const { return 2.0 / 3.0; }
  double mu2() const { return 0.5; }
  double sample(RngStream& rng) const;
};

// Inverse-CDF draw from Beta(2,1): sqrt(U), U uniform on (0,1).
double sample_beta21(RngStream& rng);

// sigma_w = sqrt(2) * (-mu1/sqrt(pi) + sqrt(mu1^2/pi + 1 - mu2)).
// The positive root of sigma^2 + 2*sqrt(2/pi)*mu1*sigma + 2*mu2 = 2, which
// pins the length-map contraction factor at N/(N+1).
double sigma_w_from_moments(double mu1, double mu2);

struct HeInit {
  double bias_const = 0.0;
};

// Weights and biases uniform on (-half_width, half_width).
struct SymmetricUniformInit {
  double half_width = 1.0;
};

// Weights N(0, std^2), biases exactly 0.
struct BiasFreeSymmetricInit {
  double stddev = 1.0;
};

struct OrthogonalInit {
  double gain = std::numbers::sqrt2;
};

struct RaiInit {
  AsymmetricDist dist{};
  double sigma_w = 0.0;  // 0 means: derive from dist moments

  double resolved_sigma_w() const {
    return sigma_w > 0.0 ? sigma_w : sigma_w_from_moments(dist.mu1(), dist.mu2());
  }
};

using InitScheme =
    std::variant<HeInit, SymmetricUniformInit, BiasFreeSymmetricInit, OrthogonalInit, RaiInit>;

// W^l_ij ~ N(0, 2/N_{l-1}); every bias set to bias_const.
Params he_init(const Architecture& arch, RngStream& rng, double bias_const = 0.0);

Params symmetric_uniform_init(const Architecture& arch, RngStream& rng, double half_width);

Params bias_free_symmetric_init(const Architecture& arch, RngStream& rng, double stddev);

// Per layer: orthonormalize a square Gaussian of the larger dimension (QR
// with sign correction by diag(R)), slice the leading block, scale by gain.
// Biases 0.
Params orthogonal_init(const Architecture& arch, RngStream& rng, double gain);

// Chosen asymmetric slot per row of each layer l >= 2; index is 0-based into
// the augmented row [W_j, b_j] of length N_{l-1}+1.
struct RaiSlots {
  std::vector<std::vector<std::size_t>> slot;  // [layer l-2][row j]
};

// Layer 1: He with zero bias. Layers l >= 2: per augmented row, one uniformly
// chosen slot ~ dist, remaining slots ~ N(0, sigma_w^2 / N_{l-1}).
Params rai_init(const Architecture& arch, RngStream& rng, const RaiInit& cfg = RaiInit{},
                RaiSlots* slots = nullptr);

Params initialize(const Architecture& arch, const InitScheme& scheme, RngStream& rng);

// Short stable name for artifacts: he, sym-uniform, bias-free-sym, orthogonal, rai.
std::string scheme_name(const InitScheme& scheme);

}  // namespace relulab
