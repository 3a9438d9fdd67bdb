#include "relulab/bdp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "relulab/parallel.hpp"

namespace relulab {

namespace {

Dataset materialize_grid(const Grid1D& g) {
  if (g.points < 2) throw std::invalid_argument("Grid1D: need at least 2 points");
  if (g.r <= 0.0) throw std::invalid_argument("Grid1D: radius must be positive");
  Dataset d;
  d.radius = g.r;
  d.inputs.reserve(static_cast<std::size_t>(g.points));
  for (int i = 0; i < g.points; ++i) {
    const double x = -g.r + 2.0 * g.r * static_cast<double>(i) / static_cast<double>(g.points - 1);
    d.inputs.push_back({x});
  }
  return d;
}

Dataset materialize_ball(const RandomBall& b) {
  if (b.points < 1) throw std::invalid_argument("RandomBall: need at least 1 point");
  if (b.r <= 0.0 || b.d_in < 1) throw std::invalid_argument("RandomBall: bad radius or dim");
  RngStream rng(mix_seed(b.seed, 0x8A11));
  Dataset d;
  d.radius = b.r;
  for (int attempt = 0; attempt < 64; ++attempt) {
    d.inputs.clear();
    for (int i = 0; i < b.points; ++i) {
      std::vector<double> x(static_cast<std::size_t>(b.d_in));
      double norm2 = 0.0;
      for (double& c : x) {
        c = rng.normal();
        norm2 += c * c;
      }
      const double norm = std::sqrt(norm2);
      const double radius =
          b.r * std::pow(rng.uniform(), 1.0 / static_cast<double>(b.d_in));
      for (double& c : x) c = norm > 0.0 ? c / norm * radius : 0.0;
      d.inputs.push_back(std::move(x));
    }
    if (b.d_in != 1 || b.points < 2) return d;
    bool pos = false, neg = false;
    for (const auto& x : d.inputs) {
      pos = pos || x[0] > 0.0;
      neg = neg || x[0] < 0.0;
    }
    if (pos && neg) return d;  // d_in = 1 needs both signs present
  }
  throw std::runtime_error("RandomBall: failed to draw sign-balanced 1-D sample");
}

}  // namespace

Dataset materialize(const DataSpec& spec) {
  if (const auto* g = std::get_if<Grid1D>(&spec)) return materialize_grid(*g);
  return materialize_ball(std::get<RandomBall>(spec));
}

DeadCheck is_born_dead(const Params& params, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("is_born_dead: empty dataset");
  const int L = params.layer_count();
  DeadCheck res;
  if (L < 2) return res;  // no hidden layer, P(A_1) = 0

  std::vector<int> candidates;
  for (int l = 1; l <= L - 1; ++l) candidates.push_back(l);

  // Scan inputs from both ends of the dataset; on sign-sorted 1-D grids this
  // alternates signs and prunes live layers after a couple of inputs.
  const std::size_t m = data.size();
  std::vector<std::size_t> order;
  order.reserve(m);
  for (std::size_t a = 0, b = m; a < b;) {
    order.push_back(a++);
    if (a < b) order.push_back(--b);
  }

  std::vector<double> cur, post;
  for (std::size_t idx : order) {
    const std::vector<double>& x = data.inputs[idx];
    const int max_c = candidates.back();
    // forward through layers 1..max_c, pruning layers that fire on this input
    cur.assign(params.biases[0].begin(), params.biases[0].end());
    {
      const Matrix& W = params.weights[0];
      for (std::size_t i = 0; i < W.rows; ++i) {
        const double* w = W.row(i);
        double acc = cur[i];
        for (std::size_t j = 0; j < W.cols; ++j) acc += w[j] * x[j];
        cur[i] = acc;
      }
    }
    std::size_t keep = 0;
    std::size_t ci = 0;
    for (int l = 1; l <= max_c; ++l) {
      post.resize(cur.size());
      bool all_zero = true;
      for (std::size_t i = 0; i < cur.size(); ++i) {
        post[i] = cur[i] > 0.0 ? cur[i] : 0.0;
        all_zero = all_zero && post[i] == 0.0;
      }
      while (ci < candidates.size() && candidates[ci] == l) {
        if (all_zero) candidates[keep++] = candidates[ci];
        ++ci;
      }
      if (l < max_c) {
        const Matrix& W = params.weights[static_cast<std::size_t>(l)];
        const std::vector<double>& b = params.biases[static_cast<std::size_t>(l)];
        cur.resize(W.rows);
        for (std::size_t i = 0; i < W.rows; ++i) {
          const double* w = W.row(i);
          double acc = b[i];
          for (std::size_t j = 0; j < W.cols; ++j) acc += w[j] * post[j];
          cur[i] = acc;
        }
      }
    }
    candidates.resize(keep);
    if (candidates.empty()) return res;
  }
  res.dead = true;
  res.layer = candidates.front();
  return res;
}

bool is_constant_on(const Params& params, const Dataset& data, double tol) {
  if (data.size() < 2) throw std::invalid_argument("is_constant_on: need at least 2 points");
  const std::vector<double> ref = forward(params, data.inputs.front());
  for (std::size_t i = 1; i < data.size(); ++i) {
    const std::vector<double> out = forward(params, data.inputs[i]);
    for (std::size_t k = 0; k < ref.size(); ++k)
      if (std::fabs(out[k] - ref[k]) > tol) return false;
  }
  return true;
}

BdpEstimate estimate_bdp(const Architecture& arch, const InitScheme& scheme,
                         const Dataset& data, long long trials, const Rng& rng,
                         unsigned jobs) {
  if (trials < 1) throw std::invalid_argument("estimate_bdp: trials must be >= 1");
  if (arch.input_dim() != data.input_dim())
    throw std::invalid_argument("estimate_bdp: dataset dim does not match d_in");
  std::atomic<long long> dead{0};
  parallel_for(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    RngStream stream = rng.trial_stream(t);
    const Params p = initialize(arch, scheme, stream);
    if (is_born_dead(p, data).dead) dead.fetch_add(1, std::memory_order_relaxed);
  });
  BdpEstimate est;
  est.trials = trials;
  est.dead = dead.load();
  est.p_hat = static_cast<double>(est.dead) / static_cast<double>(trials);
  est.ci95 = wilson95(est.dead, trials);
  return est;
}

double upper_bound_sym(const std::vector<int>& hidden_widths) {
  double prod = 1.0;
  for (int n : hidden_widths) {
    if (n < 1) throw std::invalid_argument("upper_bound_sym: widths must be >= 1");
    prod *= 1.0 - std::ldexp(1.0, -n);
  }
  return 1.0 - prod;
}

double upper_bound_sym_const(int L, int N) {
  if (L < 1) throw std::invalid_argument("upper_bound_sym_const: L must be >= 1");
  return upper_bound_sym(std::vector<int>(static_cast<std::size_t>(L - 1), N));
}

double lower_bound_d1(int L, int N) {
  if (L < 2) throw std::domain_error("lower_bound_d1: defined for L >= 2");
  if (N < 1) throw std::domain_error("lower_bound_d1: N must be >= 1");
  const double half_n = std::ldexp(1.0, -N);          // 2^-N
  const double quarter_n = std::ldexp(1.0, -2 * N);   // 4^-N
  const double a1 = 1.0 - half_n;
  const double a2 = 1.0 - 2.0 * half_n - (N - 1) * quarter_n;
  const double coef = (1.0 - 2.0 * half_n) * (1.0 - half_n) / (1.0 + (N - 1) * half_n);
  const double e = static_cast<double>(L - 2);
  const double a1e = std::pow(a1, e);
  const double a2e = std::pow(a2, e);
  return 1.0 - a1e + coef * (-a1e + a2e);
}

double plow_markov_oracle(int L, int N) {
  if (L < 2) throw std::domain_error("plow_markov_oracle: defined for L >= 2");
  if (N < 1) throw std::domain_error("plow_markov_oracle: N must be >= 1");
  const double half_n = std::ldexp(1.0, -N);
  const double quarter_n = std::ldexp(1.0, -2 * N);
  // rows: dead / single-ray / two-ray states of the 1-D signal
  const double P[3][3] = {
      {1.0, 0.0, 0.0},
      {half_n, 1.0 - half_n, 0.0},
      {quarter_n, 2.0 * half_n + (N - 2) * quarter_n,
       1.0 - 2.0 * half_n - (N - 1) * quarter_n},
  };
  double pi[3] = {0.0, 2.0 * half_n, 1.0 - 2.0 * half_n};
  for (int step = 0; step < L - 2; ++step) {
    double next[3] = {0.0, 0.0, 0.0};
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) next[j] += pi[i] * P[i][j];
    pi[0] = next[0];
    pi[1] = next[1];
    pi[2] = next[2];
  }
  return pi[0];
}

int safe_width(int L, double delta) {
  if (L < 1) throw std::invalid_argument("safe_width: L must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("safe_width: delta must lie in (0, 1)");
  int k = static_cast<int>(std::ceil(std::log2(static_cast<double>(L) / delta)));
  k = std::max(k, 1);
  // pin down float rounding of the log: smallest k with L * 2^-k <= delta
  while (k > 1 && static_cast<double>(L) * std::ldexp(1.0, -(k - 1)) <= delta) --k;
  while (static_cast<double>(L) * std::ldexp(1.0, -k) > delta) ++k;
  return k;
}

long long max_depth(int N, double delta) {
  if (N < 1) throw std::invalid_argument("max_depth: N must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("max_depth: delta must lie in (0, 1)");
  return static_cast<long long>(std::floor(delta * std::ldexp(1.0, N)));
}

double quadrant_prob_mc(const std::vector<double>& v1, const std::vector<double>& v2,
                        long long rows, RngStream& rng) {
  if (v1.size() != v2.size() || v1.empty())
    throw std::invalid_argument("quadrant_prob_mc: bad vectors");
  long long hits = 0;
  std::vector<double> w(v1.size());
  for (long long t = 0; t < rows; ++t) {
    for (double& c : w) c = rng.normal();
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      d1 += w[i] * v1[i];
      d2 += w[i] * v2[i];
    }
    if (d1 > 0.0 && d2 < 0.0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows);
}

double quadrant_prob_estimate(int N, int pairs, long long rows_per_pair, RngStream& rng) {
  if (N < 1 || pairs < 1 || rows_per_pair < 1)
    throw std::invalid_argument("quadrant_prob_estimate: bad arguments");
  auto draw_nonneg = [&](std::vector<double>& v) {
    // sparse nonnegative directions probe the worst case (near-orthogonal pairs)
    bool nonzero = false;
    for (double& c : v) {
      c = rng.uniform() < 0.5 ? std::fabs(rng.normal()) : 0.0;
      nonzero = nonzero || c != 0.0;
    }
    if (!nonzero) v[rng.index(v.size())] = std::fabs(rng.normal());
  };
  double max_p = 0.0;
  std::vector<double> v1(static_cast<std::size_t>(N)), v2(static_cast<std::size_t>(N));
  for (int p = 0; p < pairs; ++p) {
    draw_nonneg(v1);
    draw_nonneg(v2);
    max_p = std::max(max_p, quadrant_prob_mc(v1, v2, rows_per_pair, rng));
  }
  return max_p;
}

}  // namespace relulab
