#pragma once

// Exact laws of vertex degrees. D(v) is a sum of independent Bernoulli(p_uv),
// i.e. Poisson-binomial; its pmf is built by convolving one edge at a time.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "kernel.hpp"

namespace irgdeg {

/// pmf of a sum of independent Bernoulli(probs[k]) on {0, ..., probs.size()}.
inline std::vector<double> poisson_binomial_pmf(std::span<const double> probs) {
  std::vector<double> pmf(probs.size() + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t top = 0;
  for (double p : probs) {
    ++top;
    for (std::size_t k = top; k > 0; --k) pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
    pmf[0] *= 1.0 - p;
  }
  const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  if (total > 0.0)
    for (auto& x : pmf) x /= total;
  return pmf;
}

/// Law of the degree of `owner` after the vertices in `excluded` and their edges are removed.
struct DegreePmf {
  Vertex owner = 0;
  std::vector<Vertex> excluded;
  std::vector<double> probs;

  std::size_t support_size() const noexcept { return probs.size(); }
  /// P(D = k); zero outside the support (including k < 0).
  double operator()(long k) const noexcept {
    return k < 0 || static_cast<std::size_t>(k) >= probs.size() ? 0.0 : probs[static_cast<std::size_t>(k)];
  }
};

inline DegreePmf degree_pmf(const EdgeProbabilityMatrix& kernel, Vertex v, std::vector<Vertex> excluded = {}) {
  require(v < kernel.n(), "degree_pmf: vertex " + std::to_string(v) + " out of range");
  std::sort(excluded.begin(), excluded.end());
  excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
  require(!std::binary_search(excluded.begin(), excluded.end(), v),
          "degree_pmf: vertex " + std::to_string(v) + " is in the excluded set");
  require(excluded.empty() || excluded.back() < kernel.n(), "degree_pmf: excluded vertex out of range");
  std::vector<double> row;
  row.reserve(kernel.n());
  for (Vertex u = 0; u < kernel.n(); ++u)
    if (u != v && !std::binary_search(excluded.begin(), excluded.end(), u)) row.push_back(kernel(v, u));
  return DegreePmf{v, std::move(excluded), poisson_binomial_pmf(row)};
}

/// q[v][d] = P(D(v) = d) for every vertex.
inline std::vector<std::vector<double>> all_degree_pmfs(const EdgeProbabilityMatrix& kernel) {
  std::vector<std::vector<double>> q(kernel.n());
  for (Vertex v = 0; v < kernel.n(); ++v) q[v] = poisson_binomial_pmf(kernel.row_without(v));
  return q;
}

struct DegreeMoments {
  double mean = 0.0;
  double variance = 0.0;
};

inline DegreeMoments degree_moments(const EdgeProbabilityMatrix& kernel, Vertex v) {
  DegreeMoments m;
  for (Vertex u = 0; u < kernel.n(); ++u) {
    const double p = kernel(u, v);
    m.mean += p;
    m.variance += p * (1.0 - p);
  }
  return m;
}

/// Po(mu) pmf on {0, ..., kmax}, recursing outward from the mode so that no term underflows early.
inline std::vector<double> poisson_pmf(double mu, std::size_t kmax) {
  std::vector<double> pmf(kmax + 1, 0.0);
  if (mu <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  const auto mode = std::min<std::size_t>(kmax, static_cast<std::size_t>(std::floor(mu)));
  const double m = static_cast<double>(mode);
  pmf[mode] = std::exp(-mu + m * std::log(mu) - std::lgamma(m + 1.0));
  for (std::size_t k = mode; k < kmax; ++k) pmf[k + 1] = pmf[k] * mu / static_cast<double>(k + 1);
  for (std::size_t k = mode; k > 0; --k) pmf[k - 1] = pmf[k] * static_cast<double>(k) / mu;
  return pmf;
}

/// Po(mu){[lo, hi]}; hi may be SIZE_MAX for an upper tail.
inline double poisson_interval(double mu, std::size_t lo, std::size_t hi = SIZE_MAX) {
  if (lo > hi) return 0.0;
  if (mu <= 0.0) return lo == 0 ? 1.0 : 0.0;
  if (hi == SIZE_MAX) {
    if (lo == 0) return 1.0;
    if (static_cast<double>(lo) <= mu) {
      const auto below = poisson_pmf(mu, lo - 1);
      return std::max(0.0, 1.0 - std::accumulate(below.begin(), below.end(), 0.0));
    }
    // Terms decay geometrically past the mode; stop once they no longer register.
    const double width = 40.0 + 10.0 * std::sqrt(mu);
    hi = lo + static_cast<std::size_t>(width);
  }
  const auto pmf = poisson_pmf(mu, hi);
  return std::accumulate(pmf.begin() + static_cast<long>(lo), pmf.end(), 0.0);
}

/// Upper bound min(1, 1/mu_v) * sum_u p_uv^2 on d_TV(L(D(v)), Po(mu_v)); 0 when mu_v = 0.
inline double poisson_tv_bound(const EdgeProbabilityMatrix& kernel, Vertex v) {
  const double mu = degree_moments(kernel, v).mean;
  if (mu <= 0.0) return 0.0;
  double sq = 0.0;
  for (Vertex u = 0; u < kernel.n(); ++u) sq += kernel(u, v) * kernel(u, v);
  return std::min(1.0, 1.0 / mu) * sq;
}

/// Exact d_TV(law, Po(mu)) = sup_B |law(B) - Po(mu)(B)|.
inline double poisson_tv_exact(const DegreePmf& law, double mu) {
  const std::size_t m = law.support_size();
  const auto po = poisson_pmf(mu, m - 1);
  double l1 = 0.0;
  for (std::size_t k = 0; k < m; ++k) l1 += std::abs(law.probs[k] - po[k]);
  return 0.5 * (l1 + poisson_interval(mu, m));
}

/// P(D >= threshold) for threshold in [0, support size].
inline double tail_prob(const DegreePmf& pmf, std::size_t threshold) {
  require(threshold <= pmf.support_size(), "tail_prob: threshold " + std::to_string(threshold) +
                                               " exceeds support size " + std::to_string(pmf.support_size()));
  if (threshold == 0) return 1.0;
  double s = 0.0;
  for (std::size_t k = threshold; k < pmf.support_size(); ++k) s += pmf.probs[k];
  return s;
}

enum class TailConstant {
  Safe,   // min(1, 1/mu): a valid total-variation bound for every kernel
  Halved, // (1 - e^{-mu}) / (2 mu): fails e.g. at n = 2, p = 1/2, M = 1
};

/// Po(mu_v){[M, n-1]} + c * sum_x p_vx^2, clipped to 1.
inline double poisson_tail_upper_bound(const EdgeProbabilityMatrix& kernel, Vertex v, std::size_t threshold,
                                       TailConstant form = TailConstant::Safe) {
  const std::size_t n = kernel.n();
  require(threshold <= n - 1, "poisson_tail_upper_bound: threshold outside [0, n-1]");
  const double mu = degree_moments(kernel, v).mean;
  if (mu <= 0.0) return threshold == 0 ? 1.0 : 0.0;
  double sq = 0.0;
  for (Vertex x = 0; x < n; ++x) sq += kernel(v, x) * kernel(v, x);
  const double c = form == TailConstant::Safe ? std::min(1.0, 1.0 / mu) : (1.0 - std::exp(-mu)) / (2.0 * mu);
  return std::min(1.0, poisson_interval(mu, threshold, n - 1) + c * sq);
}

} // namespace irgdeg
