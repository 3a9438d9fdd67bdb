#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "relulab/init.hpp"
#include "relulab/rng.hpp"
#include "relulab/types.hpp"

using namespace relulab;

namespace {

double sample_variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

double sample_skewness(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

// 4x4 determinant by Gaussian elimination with partial pivoting.
double det4(const Matrix& W) {
  double a[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = W(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    if (piv != c) {
      for (int j = 0; j < 4; ++j) std::swap(a[c][j], a[piv][j]);
      det = -det;
    }
    det *= a[c][c];
    if (a[c][c] == 0.0) return 0.0;
    for (int r = c + 1; r < 4; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int j = c; j < 4; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("he init: weight variance is 2/fan-in and biases take the constant") {
  const Architecture arch({4, 25, 1});
  std::vector<double> draws;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    RngStream rng(mix_seed(11, t));
    const Params p = he_init(arch, rng, 10.0);
    for (double w : p.weights[0].data) draws.push_back(w);
    for (const auto& b : p.biases)
      for (double v : b) CHECK(v == 10.0);
  }
  REQUIRE(draws.size() == 100000);
  const double var = sample_variance(draws);
  const double se = 0.5 * std::sqrt(2.0 / static_cast<double>(draws.size() - 1));
  CHECK(std::fabs(var - 0.5) < 3.0 * se);
}

TEST_CASE("identical master seeds give bitwise-identical params") {
  const Architecture arch({3, 8, 8, 2});
  const InitScheme schemes[] = {HeInit{0.0}, SymmetricUniformInit{0.7},
                                BiasFreeSymmetricInit{1.3}, OrthogonalInit{1.0}, RaiInit{}};
  for (const InitScheme& s : schemes) {
    RngStream a(mix_seed(99, 5)), b(mix_seed(99, 5));
    CHECK(initialize(arch, s, a) == initialize(arch, s, b));
  }
}

TEST_CASE("distinct trial streams are uncorrelated") {
  const Rng rng{2024};
  const std::size_t n = 10000;
  std::vector<double> a(n), b(n);
  RngStream s1 = rng.trial_stream(0), s2 = rng.trial_stream(1);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = s1.normal();
    b[i] = s2.normal();
  }
  double corr = 0.0;
  for (std::size_t i = 0; i < n; ++i) corr += a[i] * b[i];
  corr /= static_cast<double>(n);
  CHECK(std::fabs(corr) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("bias-free symmetric: zero biases, zero-mean weights, uniform sign patterns") {
  const Architecture arch({2, 2, 1});
  std::vector<double> draws;
  std::map<int, int> pattern_counts;
  const int inits = 100000 / 4;
  for (int t = 0; t < inits; ++t) {
    RngStream rng(mix_seed(5150, static_cast<std::uint64_t>(t)));
    const Params p = bias_free_symmetric_init(arch, rng, 1.0);
    for (const auto& b : p.biases)
      for (double v : b) REQUIRE(v == 0.0);
    int pattern = 0;
    for (int k = 0; k < 4; ++k) {
      draws.push_back(p.weights[0].data[static_cast<std::size_t>(k)]);
      pattern |= (p.weights[0].data[static_cast<std::size_t>(k)] > 0.0) << k;
    }
    pattern_counts[pattern]++;
  }
  const double se = 1.0 / std::sqrt(static_cast<double>(draws.size()));
  double m = 0.0;
  for (double x : draws) m += x;
  m /= static_cast<double>(draws.size());
  CHECK(std::fabs(m) < 3.0 * se);

  // chi-square over the 16 sign patterns of the 2x2 weight matrix
  const double expected = static_cast<double>(inits) / 16.0;
  double chi2 = 0.0;
  for (int pat = 0; pat < 16; ++pat) {
    const double obs = static_cast<double>(pattern_counts[pat]);
    chi2 += (obs - expected) * (obs - expected) / expected;
  }
  CHECK(chi2 < 37.7);  // 99.9% quantile, df = 15
}

TEST_CASE("weight distributions are symmetric (skew near zero)") {
  const Architecture arch({5, 20, 1});
  const InitScheme schemes[] = {HeInit{0.0}, SymmetricUniformInit{1.0},
                                BiasFreeSymmetricInit{1.0}};
  for (const InitScheme& s : schemes) {
    std::vector<double> draws;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      RngStream rng(mix_seed(31337, t));
      const Params p = initialize(arch, s, rng);
      for (double w : p.weights[0].data) draws.push_back(w);
    }
    const double skew = sample_skewness(draws);
    CHECK(std::fabs(skew) < 3.0 * std::sqrt(6.0 / static_cast<double>(draws.size())));
  }
}

TEST_CASE("orthogonal init: square layers give gain^2 * identity") {
  const Architecture arch({6, 6, 6});
  RngStream rng(404);
  const double gain = 1.7;
  const Params p = orthogonal_init(arch, rng, gain);
  for (const Matrix& W : p.weights) {
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < 6; ++k) dot += W(k, i) * W(k, j);
        CHECK(std::fabs(dot - (i == j ? gain * gain : 0.0)) < 1e-10);
      }
  }
  for (const auto& b : p.biases)
    for (double v : b) CHECK(v == 0.0);
}

TEST_CASE("orthogonal init: wide layers have orthonormal rows") {
  const Architecture arch({7, 3, 1});
  RngStream rng(405);
  const double gain = std::numbers::sqrt2;
  const Params p = orthogonal_init(arch, rng, gain);
  const Matrix& W = p.weights[0];  // 3 x 7
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < 7; ++k) dot += W(i, k) * W(j, k);
      CHECK(std::fabs(dot - (i == j ? gain * gain : 0.0)) < 1e-10);
    }
}

TEST_CASE("orthogonal init: unit determinant magnitude at gain 1") {
  const Architecture arch({4, 4, 1});
  for (std::uint64_t s = 0; s < 10; ++s) {
    RngStream rng(mix_seed(777, s));
    const Params p = orthogonal_init(arch, rng, 1.0);
    CHECK(std::fabs(std::fabs(det4(p.weights[0])) - 1.0) < 1e-10);
  }
}

TEST_CASE("beta(2,1) sampling: moments and CDF") {
  RngStream rng(611);
  const std::size_t n = 1000000;
  double s1 = 0.0, s2 = 0.0;
  std::size_t below_half = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sample_beta21(rng);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
    s1 += x;
    s2 += x * x;
    below_half += x <= 0.5;
  }
  const double nd = static_cast<double>(n);
  // mean 2/3, Var 1/18
  CHECK(std::fabs(s1 / nd - 2.0 / 3.0) < 3.0 * std::sqrt(1.0 / 18.0 / nd));
  // second moment 1/2, Var(X^2) = E[X^4] - 1/4 = 1/3 - 1/4 = 1/12
  CHECK(std::fabs(s2 / nd - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / nd));
  // F(0.5) = 0.25
  CHECK(std::fabs(static_cast<double>(below_half) / nd - 0.25) <
        3.0 * std::sqrt(0.25 * 0.75 / nd));
}

TEST_CASE("sigma_w from moments") {
  const double sw = sigma_w_from_moments(2.0 / 3.0, 0.5);
  CHECK(std::fabs(sw - 0.6007) < 0.0005);

  // near-zero moments approach sqrt(2)
  CHECK(sigma_w_from_moments(1e-9, 1e-9) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-8));

  // the output solves sigma^2 + 2 sqrt(2/pi) mu1 sigma + 2 mu2 = 2
  for (double mu1 : {0.5, 2.0 / 3.0, 0.75, 0.9, 1.0})
    for (double mu2 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double s = sigma_w_from_moments(mu1, mu2);
      CHECK(s > 0.0);
      const double resid =
          s * s + 2.0 * std::sqrt(2.0 / std::numbers::pi) * mu1 * s + 2.0 * mu2 - 2.0;
      CHECK(std::fabs(resid) < 1e-12);
    }

  CHECK_THROWS_AS(sigma_w_from_moments(0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(sigma_w_from_moments(0.5, 1.5), std::domain_error);
}

TEST_CASE("rai init: structure of the augmented rows") {
  const Architecture arch({1, 4, 4, 4, 1});
  RaiSlots slots;
  RngStream rng(8080);
  const RaiInit cfg{};
  const Params p = rai_init(arch, rng, cfg, &slots);

  // layer 1 is He with zero bias
  for (double b : p.biases[0]) CHECK(b == 0.0);

  REQUIRE(slots.slot.size() == 3);  // layers 2..4
  for (int l = 2; l <= 4; ++l) {
    const Matrix& W = p.weights[static_cast<std::size_t>(l - 1)];
    const auto& layer_slots = slots.slot[static_cast<std::size_t>(l - 2)];
    REQUIRE(layer_slots.size() == W.rows);
    for (std::size_t j = 0; j < W.rows; ++j) {
      const std::size_t k = layer_slots[j];
      REQUIRE(k <= W.cols);
      const double v = k == W.cols ? p.biases[static_cast<std::size_t>(l - 1)][j] : W(j, k);
      CHECK(v >= 0.0);
      CHECK(v <= cfg.dist.max_value());
    }
  }

  CHECK_THROWS_AS(
      [&] {
        RngStream r(1);
        return rai_init(Architecture({3, 2}), r);
      }(),
      std::invalid_argument);
}

TEST_CASE("rai init: slot index is uniform and gaussian entries have variance sigma_w^2/fan-in") {
  const Architecture arch({1, 4, 4, 1});
  const RaiInit cfg{};
  const double sigma_w = cfg.resolved_sigma_w();

  std::vector<long long> slot_counts(5, 0);
  std::vector<double> gauss;
  long long rows_seen = 0;
  for (std::uint64_t t = 0; rows_seen < 10000; ++t) {
    RaiSlots slots;
    RngStream rng(mix_seed(4242, t));
    const Params p = rai_init(arch, rng, cfg, &slots);
    const Matrix& W = p.weights[1];  // layer 2: 4x4, fan-in 4
    const auto& layer_slots = slots.slot[0];
    for (std::size_t j = 0; j < W.rows; ++j) {
      ++rows_seen;
      ++slot_counts[layer_slots[j]];
      for (std::size_t k = 0; k < W.cols; ++k)
        if (k != layer_slots[j]) gauss.push_back(W(j, k));
      if (layer_slots[j] != W.cols) gauss.push_back(p.biases[1][j]);
    }
  }

  // chi-square for uniformity over the 5 slots (df = 4, 99.9% quantile 18.47)
  const double expected = static_cast<double>(rows_seen) / 5.0;
  double chi2 = 0.0;
  for (long long c : slot_counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 18.47);

  REQUIRE(gauss.size() > 10000);
  const double target_var = sigma_w * sigma_w / 4.0;
  const double var = sample_variance(gauss);
  const double se = target_var * std::sqrt(2.0 / static_cast<double>(gauss.size() - 1));
  CHECK(std::fabs(var - target_var) < 3.0 * se);
}
