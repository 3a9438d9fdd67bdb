#include "relulab/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace relulab {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

Interval wilson95(long long successes, long long trials) {
  if (trials <= 0) throw std::invalid_argument("wilson95: trials must be positive");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson95: successes out of range");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      (kZ95 / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Interval ci;
  ci.low = std::max(0.0, center - half);
  ci.high = std::min(1.0, center + half);
  return ci;
}

double binom_se(long long successes, long long trials) {
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  return std::sqrt(p * (1.0 - p) / n);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

Interval mean_ci95(const std::vector<double>& v) {
  const double m = mean(v);
  const double se =
      v.empty() ? 0.0 : sample_stddev(v) / std::sqrt(static_cast<double>(v.size()));
  return Interval{m - kZ95 * se, m + kZ95 * se};
}

}  // namespace relulab
