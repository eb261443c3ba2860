#pragma once

// Size-biased coupling for the degree indicators X_(v,i) = 1(D(v) = i).
//
// Given a graph G and a target (v, i), the coupled graph G^(v,i) differs from G
// only in edges at v: if D(v) = d > i an i-subset x_i of the neighbourhood x_d
// is kept with weight f+(x_i | x_d); if d < i an i-superset is formed with
// weight f-(x_i | x_d). Marginally G^(v,i) has the law of G given D(v) = i.
//
// Both weights are mixtures over a neighbourhood N' drawn from L(N(v) | D(v) = i):
//   f+ : keep N' ∩ x_d, then top up with a uniform subset of x_d \ N',
//   f- : add a uniform (i - d)-subset of N' \ x_d to x_d.
// Sampling uses this representation; the closed-form weights below evaluate
// the same probabilities through grouped Poisson-binomial counts.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <vector>

#include "degree_dist.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace irgdeg {

/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;

inline VertexSet make_set(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const VertexSet& sub, const VertexSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

/// V \ {v}.
inline VertexSet others(std::size_t n, Vertex v) {
  VertexSet out;
  out.reserve(n - 1);
  for (Vertex u = 0; u < n; ++u)
    if (u != v) out.push_back(u);
  return out;
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t t = 1; t <= k; ++t) c = c * static_cast<double>(n - k + t) / static_cast<double>(t);
  return c;
}

/// P(|N(v) ∩ A| = a, |N(v) ∩ B| = b, |N(v) ∩ C| = c | D(v) = degree), A, B, C partitioning V \ {v}.
struct GroupedDegreeQuery {
  Vertex v = 0;
  VertexSet group_a, group_b, group_c;
  std::size_t count_a = 0, count_b = 0, count_c = 0;
  std::size_t degree = 0;
};

namespace detail {

inline std::vector<double> group_pmf(const EdgeProbabilityMatrix& kernel, Vertex v, const VertexSet& group) {
  std::vector<double> probs;
  probs.reserve(group.size());
  for (auto u : group) probs.push_back(kernel(v, u));
  return poisson_binomial_pmf(probs);
}

inline double pmf_at(const std::vector<double>& pmf, long k) {
  return k < 0 || static_cast<std::size_t>(k) >= pmf.size() ? 0.0 : pmf[static_cast<std::size_t>(k)];
}

inline double conditioning_mass(const EdgeProbabilityMatrix& kernel, Vertex v, std::size_t degree) {
  require(v < kernel.n(), "vertex " + std::to_string(v) + " out of range");
  require(degree < kernel.n(), "degree " + std::to_string(degree) + " outside [0, n-1]");
  const double q = degree_pmf(kernel, v).probs[degree];
  require(q > 0.0, "conditioning on a null event: P(D(" + std::to_string(v) + ") = " + std::to_string(degree) +
                       ") = 0");
  return q;
}

inline void check_vertex_set(const EdgeProbabilityMatrix& kernel, Vertex v, const VertexSet& s, const char* name) {
  require(std::is_sorted(s.begin(), s.end()) && std::adjacent_find(s.begin(), s.end()) == s.end(),
          std::string(name) + " must be sorted and duplicate-free");
  for (auto u : s) {
    require(u < kernel.n(), std::string(name) + " contains out-of-range vertex " + std::to_string(u));
    require(u != v, std::string(name) + " must not contain the focal vertex");
  }
}

} // namespace detail

inline double grouped_conditional_prob(const EdgeProbabilityMatrix& kernel, const GroupedDegreeQuery& q) {
  const std::size_t n = kernel.n();
  require(q.v < n, "grouped query: vertex out of range");
  for (const auto* g : {&q.group_a, &q.group_b, &q.group_c}) detail::check_vertex_set(kernel, q.v, *g, "group");
  VertexSet all = q.group_a;
  all.insert(all.end(), q.group_b.begin(), q.group_b.end());
  all.insert(all.end(), q.group_c.begin(), q.group_c.end());
  std::sort(all.begin(), all.end());
  require(all == others(n, q.v), "grouped query: groups must partition V \\ {v}");
  require(q.count_a <= q.group_a.size() && q.count_b <= q.group_b.size() && q.count_c <= q.group_c.size(),
          "grouped query: count exceeds group size");
  require(q.count_a + q.count_b + q.count_c == q.degree, "grouped query: counts must sum to the degree");
  const double mass = detail::conditioning_mass(kernel, q.v, q.degree);
  return detail::group_pmf(kernel, q.v, q.group_a)[q.count_a] * detail::group_pmf(kernel, q.v, q.group_b)[q.count_b] *
         detail::group_pmf(kernel, q.v, q.group_c)[q.count_c] / mass;
}

/// Weight of keeping x_i ⊂ x_d when v currently has neighbourhood x_d and must drop to degree |x_i|.
inline double f_plus(const EdgeProbabilityMatrix& kernel, Vertex v, const VertexSet& xd, const VertexSet& xi) {
  detail::check_vertex_set(kernel, v, xd, "x_d");
  detail::check_vertex_set(kernel, v, xi, "x_i");
  require(xi.size() < xd.size() && is_subset(xi, xd), "f_plus: need x_i a proper subset of x_d");
  const std::size_t d = xd.size(), i = xi.size();
  const double mass = detail::conditioning_mass(kernel, v, i);
  const auto kept = detail::group_pmf(kernel, v, xi);
  const auto dropped = detail::group_pmf(kernel, v, set_difference(xd, xi));
  const auto outside = detail::group_pmf(kernel, v, set_difference(others(kernel.n(), v), xd));
  double f = 0.0;
  for (std::size_t j = 0; j <= i; ++j)
    f += kept[j] * dropped[0] * detail::pmf_at(outside, static_cast<long>(i - j)) / binomial(d - j, i - j);
  return f / mass;
}

/// Weight of growing x_d to the superset x_i when v must rise to degree |x_i|.
inline double f_minus(const EdgeProbabilityMatrix& kernel, Vertex v, const VertexSet& xd, const VertexSet& xi) {
  detail::check_vertex_set(kernel, v, xd, "x_d");
  detail::check_vertex_set(kernel, v, xi, "x_i");
  require(xd.size() < xi.size() && is_subset(xd, xi), "f_minus: need x_d a proper subset of x_i");
  const std::size_t d = xd.size(), i = xi.size();
  const double mass = detail::conditioning_mass(kernel, v, i);
  // By complementation this is f+ on non-neighbourhoods: the k vertices of x_d
  // left out of N' are balanced by k neighbours outside x_i.
  const auto original = detail::group_pmf(kernel, v, xd);
  const auto added = detail::group_pmf(kernel, v, set_difference(xi, xd));
  const auto outside = detail::group_pmf(kernel, v, set_difference(others(kernel.n(), v), xi));
  double f = 0.0;
  for (std::size_t k = 0; k <= d && k + i < kernel.n(); ++k)
    f += original[d - k] * added[i - d] * outside[k] / binomial(k + i - d, k);
  return f / mass;
}

/// All admissible targets x_i for a current neighbourhood x_d, with their f+/f- weights.
inline std::vector<std::pair<VertexSet, double>> transition_weights(const EdgeProbabilityMatrix& kernel, Vertex v,
                                                                      const VertexSet& xd, std::size_t i) {
  std::vector<std::pair<VertexSet, double>> out;
  if (xd.size() == i) {
    out.emplace_back(xd, 1.0);
    return out;
  }
  const bool shrink = xd.size() > i;
  const VertexSet pool = shrink ? xd : set_difference(others(kernel.n(), v), xd);
  const std::size_t pick = shrink ? i : i - xd.size();
  std::vector<bool> mask(pool.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(pick), true);
  do {
    VertexSet chosen;
    for (std::size_t t = 0; t < pool.size(); ++t)
      if (mask[t]) chosen.push_back(pool[t]);
    if (shrink) {
      out.emplace_back(chosen, f_plus(kernel, v, xd, chosen));
    } else {
      auto target = make_set([&] { auto s = xd; s.insert(s.end(), chosen.begin(), chosen.end()); return s; }());
      out.emplace_back(target, f_minus(kernel, v, xd, target));
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

/// Draws N ~ L(N(v) | D(v) = degree) by sequential conditional Bernoulli sampling.
class ConditionalNeighbourhoodSampler {
public:
  ConditionalNeighbourhoodSampler(const EdgeProbabilityMatrix& kernel, Vertex v, std::size_t degree)
      : candidates_(others(kernel.n(), v)), degree_(degree) {
    require(v < kernel.n(), "sampler: vertex out of range");
    require(degree < kernel.n(), "sampler: degree outside [0, n-1]");
    const std::size_t m = candidates_.size();
    probs_.reserve(m);
    for (auto u : candidates_) probs_.push_back(kernel(v, u));
    // suffix_[k * (degree+1) + r] = P(#successes among candidates k.. = r)
    const std::size_t w = degree + 1;
    suffix_.assign((m + 1) * w, 0.0);
    suffix_[m * w] = 1.0;
    for (std::size_t k = m; k-- > 0;) {
      for (std::size_t r = 0; r <= degree; ++r) {
        double s = (1.0 - probs_[k]) * suffix_[(k + 1) * w + r];
        if (r > 0) s += probs_[k] * suffix_[(k + 1) * w + r - 1];
        suffix_[k * w + r] = s;
      }
    }
    require(suffix_[degree] > 0.0, "conditioning on a null event: P(D(" + std::to_string(v) + ") = " +
                                      std::to_string(degree) + ") = 0");
  }

  VertexSet operator()(Rng& rng) const {
    const std::size_t w = degree_ + 1;
    VertexSet out;
    out.reserve(degree_);
    std::size_t r = degree_;
    for (std::size_t k = 0; k < candidates_.size() && r > 0; ++k) {
      const double take = probs_[k] * suffix_[(k + 1) * w + r - 1] / suffix_[k * w + r];
      if (rng.uniform() < take) {
        out.push_back(candidates_[k]);
        --r;
      }
    }
    return out;
  }

private:
  VertexSet candidates_;
  std::vector<double> probs_;
  std::vector<double> suffix_;
  std::size_t degree_;
};

namespace detail {

inline VertexSet uniform_subset(VertexSet pool, std::size_t k, Rng& rng) {
  for (std::size_t t = 0; t < k; ++t) std::swap(pool[t], pool[t + rng.below(pool.size() - t)]);
  pool.resize(k);
  return make_set(std::move(pool));
}

} // namespace detail

/// New neighbourhood of v: x_d mapped to an i-set with the f+/f- law.
inline VertexSet sample_coupled_neighbourhood(const ConditionalNeighbourhoodSampler& sampler, const VertexSet& xd,
                                              std::size_t i, Rng& rng) {
  if (xd.size() == i) return xd;
  const VertexSet drawn = sampler(rng);
  if (xd.size() > i) {
    VertexSet kept = set_intersection(drawn, xd);
    const auto top_up = detail::uniform_subset(set_difference(xd, drawn), i - kept.size(), rng);
    kept.insert(kept.end(), top_up.begin(), top_up.end());
    return make_set(std::move(kept));
  }
  VertexSet grown = xd;
  const auto extra = detail::uniform_subset(set_difference(drawn, xd), i - xd.size(), rng);
  grown.insert(grown.end(), extra.begin(), extra.end());
  return make_set(std::move(grown));
}

struct CouplingOutcome {
  Graph graph;
  Vertex vertex = 0;
  std::size_t degree = 0;
  std::vector<Edge> removed;
  std::vector<Edge> added;
};

namespace detail {

inline Edge ordered(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

inline CouplingOutcome rewire(const Graph& g, Vertex v, std::size_t i, const VertexSet& target) {
  const VertexSet& current = g.neighbours(v);
  CouplingOutcome out{g, v, i, {}, {}};
  if (target == current) return out;
  for (auto u : set_difference(current, target)) out.removed.push_back(ordered(v, u));
  for (auto u : set_difference(target, current)) out.added.push_back(ordered(v, u));
  std::sort(out.removed.begin(), out.removed.end());
  std::sort(out.added.begin(), out.added.end());
  std::vector<Edge> edges;
  edges.reserve(g.edges().size() + out.added.size());
  for (const auto& e : g.edges())
    if (!std::binary_search(out.removed.begin(), out.removed.end(), e)) edges.push_back(e);
  edges.insert(edges.end(), out.added.begin(), out.added.end());
  out.graph = Graph(g.n(), std::move(edges));
  return out;
}

} // namespace detail

/// G^(v,i): forces D(v) = i by the size-biased coupling; edges away from v are untouched.
inline CouplingOutcome couple_vertex_degree(const Graph& g, const EdgeProbabilityMatrix& kernel, Vertex v,
                                            std::size_t i, Seed seed) {
  require(g.n() == kernel.n(), "couple: graph and kernel sizes differ");
  const ConditionalNeighbourhoodSampler sampler(kernel, v, i);
  Rng rng(seed);
  return detail::rewire(g, v, i, sample_coupled_neighbourhood(sampler, g.neighbours(v), i, rng));
}

/// Random index I = (v, i) with P(I = v) = q_{v,i} / lambda_{A_i}.
struct SizeBiasedIndex {
  std::size_t degree = 0;
  Vertex vertex = 0;
  std::vector<double> selection_probs;
};

inline std::vector<double> size_biased_index_probs(const EdgeProbabilityMatrix& kernel, std::size_t i) {
  require(i < kernel.n(), "size-biased index: degree outside [0, n-1]");
  std::vector<double> probs(kernel.n());
  for (Vertex v = 0; v < kernel.n(); ++v) probs[v] = degree_pmf(kernel, v).probs[i];
  const double lambda = std::accumulate(probs.begin(), probs.end(), 0.0);
  require(lambda > 0.0, "size-biased index: E W_" + std::to_string(i) + " = 0");
  for (auto& p : probs) p /= lambda;
  return probs;
}

inline Vertex draw_index(const std::vector<double>& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  Vertex last = 0;
  for (Vertex v = 0; v < probs.size(); ++v) {
    if (probs[v] <= 0.0) continue;
    acc += probs[v];
    last = v;
    if (u < acc) return v;
  }
  return last;
}

/// The W-size-biased graph in coordinate i: draw I independently of g, then couple at (I, i).
inline std::pair<CouplingOutcome, SizeBiasedIndex> size_biased_count_graph(const Graph& g,
                                                                            const EdgeProbabilityMatrix& kernel,
                                                                            std::size_t i, Seed seed) {
  SizeBiasedIndex index{i, 0, size_biased_index_probs(kernel, i)};
  Rng rng(seed);
  index.vertex = draw_index(index.selection_probs, rng);
  auto outcome = couple_vertex_degree(g, kernel, index.vertex, i, derive_seed(seed, 1));
  return {std::move(outcome), std::move(index)};
}

} // namespace irgdeg
