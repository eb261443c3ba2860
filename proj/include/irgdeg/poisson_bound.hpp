#pragma once

// Poisson process approximation of the M-truncated indicator field
// Xi_M = {X_(v,i) : i >= M} and the compound Poisson approximation of the
// truncated degree vector D_M, with the total-variation bound b_{M,1} + b_{M,2}.

#include <cmath>
#include <numeric>
#include <vector>

#include "degree_dist.hpp"
#include "exact_oracle.hpp"
#include "normal_bound.hpp"

namespace irgdeg {

struct PoissonBoundReport {
  std::size_t threshold = 0;
  double b1 = 0.0;
  double b2 = 0.0;
  double total() const { return b1 + b2; }
};

/// b1 = sum_v P(D(v) >= M)^2, b2 = 2 sum_v sum_{u != v} P(D(v) >= M) P(D^(v)(u) >= M - 1).
inline PoissonBoundReport poisson_process_bound(const EdgeProbabilityMatrix& kernel, std::size_t threshold) {
  const std::size_t n = kernel.n();
  require(threshold <= n - 1, "poisson_process_bound: M must lie in [0, n-1]");
  const auto q = all_degree_pmfs(kernel);
  auto upper = [](const std::vector<double>& pmf, long from) {
    if (from <= 0) return 1.0;
    double s = 0.0;
    for (auto k = static_cast<std::size_t>(from); k < pmf.size(); ++k) s += pmf[k];
    return s;
  };
  PoissonBoundReport r{threshold, 0.0, 0.0};
  for (Vertex v = 0; v < n; ++v) {
    const double tail_v = upper(q[v], static_cast<long>(threshold));
    r.b1 += tail_v * tail_v;
    if (tail_v == 0.0) continue;
    for (Vertex u = 0; u < n; ++u) {
      if (u == v) continue;
      r.b2 += 2.0 * tail_v * upper(remove_bernoulli(q[u], kernel(u, v)), static_cast<long>(threshold) - 1);
    }
  }
  return r;
}

/// A realization of Xi_M: entry v holds D(v) when D(v) >= M and -1 otherwise,
/// so X_(v,i) = 1 exactly when entry v equals i.
struct TruncatedIndicatorField {
  std::size_t threshold = 0;
  std::vector<long> level;

  int operator()(Vertex v, std::size_t i) const { return level[v] == static_cast<long>(i) ? 1 : 0; }
};

inline TruncatedIndicatorField indicator_field(const Graph& g, std::size_t threshold) {
  TruncatedIndicatorField f{threshold, std::vector<long>(g.n(), -1)};
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) >= threshold) f.level[v] = static_cast<long>(g.degree(v));
  return f;
}

/// Y_{v,M} = sum_{i >= M} i * Po(q_{v,i}) on {0, ..., cap} with the mass beyond cap kept separately.
struct CompoundPoissonLaw {
  Vertex vertex = 0;
  std::size_t threshold = 0;
  std::vector<double> pmf;
  double tail_mass = 0.0;

  double operator()(std::size_t k) const { return k < pmf.size() ? pmf[k] : 0.0; }
};

/// Convolves the lattice laws of i * Po(q_{v,i}); the cap starts at n-1 and doubles
/// until the mass beyond it is below tail_eps.
inline CompoundPoissonLaw compound_poisson_law(const EdgeProbabilityMatrix& kernel, Vertex v, std::size_t threshold,
                                               double tail_eps = 1e-12) {
  const std::size_t n = kernel.n();
  require(tail_eps > 0.0, "compound_poisson_law: tail_eps must be positive");
  require(v < n && threshold <= n - 1, "compound_poisson_law: vertex or threshold out of range");
  const auto q = degree_pmf(kernel, v).probs;
  for (std::size_t cap = n - 1;; cap *= 2) {
    std::vector<double> law(cap + 1, 0.0);
    law[0] = 1.0;
    for (std::size_t i = std::max<std::size_t>(threshold, 1); i < n; ++i) {
      if (q[i] <= 0.0) continue;
      const auto atom = poisson_pmf(q[i], cap / i);
      std::vector<double> next(cap + 1, 0.0);
      for (std::size_t a = 0; a <= cap; ++a) {
        if (law[a] == 0.0) continue;
        for (std::size_t c = 0; a + c * i <= cap; ++c) next[a + c * i] += law[a] * atom[c];
      }
      law = std::move(next);
    }
    const double inside = std::accumulate(law.begin(), law.end(), 0.0);
    const double tail = std::max(0.0, 1.0 - inside);
    if (tail < tail_eps || cap > (std::size_t{1} << 24)) return {v, threshold, std::move(law), tail};
  }
}

struct ApproximationCheck {
  PoissonBoundReport bound;
  double tv = 0.0;            // includes the slack below
  double outside_mass = 0.0;  // target mass off the support of the exact law, counted at 1/2 in tv
  bool holds() const { return tv <= bound.total(); }
};

namespace detail {

/// TV between a finite exact law and a target known pointwise: (1/2) sum over the support
/// of |a - b| plus half the target mass not visited.
template <class TargetProb>
std::pair<double, double> tv_against(const FiniteLaw& exact, TargetProb&& target) {
  double l1 = 0.0, visited = 0.0;
  for (const auto& [x, a] : exact) {
    const double b = target(x);
    l1 += std::abs(a - b);
    visited += b;
  }
  const double outside = std::max(0.0, 1.0 - visited);
  return {0.5 * (l1 + outside), outside};
}

} // namespace detail

/// Exact d_TV(L(Xi_M), Po(lambda_M)) by enumeration, against b_{M,1} + b_{M,2}.
inline ApproximationCheck verify_poisson_process(const EdgeProbabilityMatrix& kernel, std::size_t threshold) {
  check_enumerable(kernel);
  const std::size_t n = kernel.n();
  const auto q = all_degree_pmfs(kernel);
  const auto exact = enumerate_statistic_law(kernel, [threshold](const Graph& g) {
    const auto f = indicator_field(g, threshold);
    return Outcome(f.level.begin(), f.level.end());
  });
  // Po(lambda_M) on Gamma_M puts independent Po(q_{v,i}) counts on each cell.
  double empty_field = 1.0;
  for (Vertex v = 0; v < n; ++v)
    for (std::size_t i = threshold; i < n; ++i) empty_field *= std::exp(-q[v][i]);
  const auto [tv, outside] = detail::tv_against(exact, [&](const Outcome& x) {
    double b = empty_field;
    for (Vertex v = 0; v < n; ++v)
      if (x[v] >= 0) b *= q[v][static_cast<std::size_t>(x[v])];
    return b;
  });
  return {poisson_process_bound(kernel, threshold), tv, outside};
}

/// Exact d_TV(L(D_M), L(Y_M)) by enumeration, against b_{M,1} + b_{M,2}.
inline ApproximationCheck verify_compound_poisson(const EdgeProbabilityMatrix& kernel, std::size_t threshold,
                                                  double tail_eps = 1e-12) {
  check_enumerable(kernel);
  const std::size_t n = kernel.n();
  std::vector<CompoundPoissonLaw> target;
  for (Vertex v = 0; v < n; ++v) target.push_back(compound_poisson_law(kernel, v, threshold, tail_eps));
  const auto exact = enumerate_statistic_law(kernel, [threshold](const Graph& g) {
    const auto d = truncate_degrees(degrees(g), threshold);
    return Outcome(d.begin(), d.end());
  });
  const auto [tv, outside] = detail::tv_against(exact, [&](const Outcome& x) {
    double b = 1.0;
    for (Vertex v = 0; v < n; ++v) b *= target[v](static_cast<std::size_t>(x[v]));
    return b;
  });
  return {poisson_process_bound(kernel, threshold), tv, outside};
}

} // namespace irgdeg
