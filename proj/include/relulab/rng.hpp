#pragma once

#include <cstdint>
#include <random>

namespace relulab {

// SplitMix64 finalizer. Fixed integer mixing function used to derive
// per-trial stream seeds from (master_seed, trial_index), so that trial t
// is reproducible no matter which thread runs it or in which order.
std::uint64_t splitmix64(std::uint64_t z);

// stream seed = splitmix64(splitmix64(master) ^ splitmix64(tag + 1)).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t tag);

// A single deterministic random stream. Draw methods are stable within one
// build of this library (std::mt19937_64 underneath).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return gen_(); }

  // Uniform on (0,1).
  double uniform() {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    double u;
    do {
      u = d(gen_);
    } while (u <= 0.0);
    return u;
  }

  // Uniform on (lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }

  // Standard normal.
  double normal() { return normal_(gen_); }

  // Normal with standard deviation sd.
  double normal(double sd) { return sd * normal_(gen_); }

  // Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }

  // Independent stream derived from this stream's seed (not its state), so
  // substream(t) is the same regardless of what has been drawn already.
  RngStream substream(std::uint64_t tag) const { return RngStream(mix_seed(seed_, tag)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Master seed plus the stream derivation rule.
struct Rng {
  std::uint64_t master_seed = 0;

  RngStream trial_stream(std::uint64_t trial) const {
    return RngStream(mix_seed(master_seed, trial));
  }
};

}  // namespace relulab
