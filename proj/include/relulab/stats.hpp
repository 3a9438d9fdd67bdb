#pragma once

#include <cstddef>
#include <vector>

namespace relulab {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval for a binomial proportion at 95% confidence.
// Better behaved than the normal approximation when p is near 0 or 1.
Interval wilson95(long long successes, long long trials);

// Binomial standard error sqrt(p(1-p)/n) of an observed proportion.
double binom_se(long long successes, long long trials);

double mean(const std::vector<double>& v);

// Unbiased sample standard deviation (n-1 denominator); 0 for n < 2.
double sample_stddev(const std::vector<double>& v);

// mean +/- 1.96 * sd/sqrt(n).
Interval mean_ci95(const std::vector<double>& v);

}  // namespace relulab
