#pragma once

// Brute-force ground truth: enumerate all 2^{n(n-1)/2} graphs for n <= 5.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "coupling.hpp"
#include "graph.hpp"
#include "normal_bound.hpp"
#include "parallel.hpp"

namespace irgdeg {

inline constexpr std::size_t kMaxEnumerationVertices = 5;

/// Outcomes are canonically serialized as integer vectors (scalars, degree vectors,
/// edge masks, indicator fields all fit).
using Outcome = std::vector<std::int64_t>;

class FiniteLaw {
public:
  void add(const Outcome& x, double w) { mass_[x] += w; }
  double operator()(const Outcome& x) const {
    const auto it = mass_.find(x);
    return it == mass_.end() ? 0.0 : it->second;
  }
  double total() const {
    double s = 0.0;
    for (const auto& [x, w] : mass_) s += w;
    return s;
  }
  std::size_t size() const noexcept { return mass_.size(); }
  auto begin() const { return mass_.begin(); }
  auto end() const { return mass_.end(); }

  /// Law restricted to outcomes satisfying pred, renormalized.
  template <class Pred>
  FiniteLaw conditioned(Pred&& pred) const {
    FiniteLaw out;
    double z = 0.0;
    for (const auto& [x, w] : mass_)
      if (pred(x)) z += w;
    require(z > 0.0, "conditioning on a null event");
    for (const auto& [x, w] : mass_)
      if (pred(x)) out.add(x, w / z);
    return out;
  }

private:
  std::map<Outcome, double> mass_;
};

/// d_TV = sup_B |a(B) - b(B)| = (1/2) sum_x |a(x) - b(x)|.
inline double tv_distance(const FiniteLaw& a, const FiniteLaw& b) {
  double s = 0.0;
  for (const auto& [x, w] : a) s += std::abs(w - b(x));
  for (const auto& [x, w] : b)
    if (a(x) == 0.0) s += w;
  return 0.5 * s;
}

/// Pairs u < v in lexicographic order; bit k of a graph mask is edge_slots(n)[k].
inline std::vector<Edge> edge_slots(std::size_t n) {
  std::vector<Edge> slots;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  return slots;
}

inline Graph graph_from_mask(std::size_t n, std::uint64_t mask) {
  const auto slots = edge_slots(n);
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < slots.size(); ++k)
    if (mask >> k & 1U) edges.push_back(slots[k]);
  return Graph(n, std::move(edges));
}

inline std::uint64_t mask_from_graph(const Graph& g) {
  const auto slots = edge_slots(g.n());
  std::uint64_t mask = 0;
  for (const auto& e : g.edges())
    mask |= std::uint64_t{1} << static_cast<std::size_t>(std::lower_bound(slots.begin(), slots.end(), e) - slots.begin());
  return mask;
}

inline double graph_probability(const EdgeProbabilityMatrix& kernel, std::uint64_t mask) {
  const auto slots = edge_slots(kernel.n());
  double w = 1.0;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const double p = kernel(slots[k].first, slots[k].second);
    w *= (mask >> k & 1U) ? p : 1.0 - p;
  }
  return w;
}

inline void check_enumerable(const EdgeProbabilityMatrix& kernel, std::size_t limit = kMaxEnumerationVertices) {
  require(kernel.n() <= limit, "exact oracle: n = " + std::to_string(kernel.n()) + " exceeds the enumeration limit " +
                                   std::to_string(limit));
}

/// Calls visit(graph, mask, probability) for every graph with positive probability.
template <class Visit>
void for_each_graph(const EdgeProbabilityMatrix& kernel, Visit&& visit) {
  check_enumerable(kernel);
  const std::size_t slots = kernel.n() * (kernel.n() - 1) / 2;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
    const double w = graph_probability(kernel, mask);
    if (w > 0.0) visit(graph_from_mask(kernel.n(), mask), mask, w);
  }
}

/// Exact law of statistic(G). Work is split over bitmask ranges and merged in mask order.
inline FiniteLaw enumerate_statistic_law(const EdgeProbabilityMatrix& kernel,
                                         const std::function<Outcome(const Graph&)>& statistic, unsigned threads = 1) {
  check_enumerable(kernel);
  const std::size_t slots = kernel.n() * (kernel.n() - 1) / 2;
  const std::size_t count = std::size_t{1} << slots;
  std::vector<Outcome> values(count);
  std::vector<double> weights(count);
  parallel_for(count, threads, [&](std::size_t mask) {
    weights[mask] = graph_probability(kernel, mask);
    if (weights[mask] > 0.0) values[mask] = statistic(graph_from_mask(kernel.n(), mask));
  });
  FiniteLaw law;
  for (std::size_t mask = 0; mask < count; ++mask)
    if (weights[mask] > 0.0) law.add(values[mask], weights[mask]);
  return law;
}

struct CoupledTransition {
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  double probability = 0.0; // P(G = from) * weight of the f+/f- choice
};

/// Every (input graph, coupled graph) pair produced at target (v, i), weighted by the
/// closed-form f+/f- values (not renormalized).
inline std::vector<CoupledTransition> enumerate_coupled_transitions(const EdgeProbabilityMatrix& kernel, Vertex v,
                                                                    std::size_t i) {
  check_enumerable(kernel);
  detail::conditioning_mass(kernel, v, i);
  std::vector<CoupledTransition> out;
  for_each_graph(kernel, [&](const Graph& g, std::uint64_t mask, double w) {
    for (const auto& [target, f] : transition_weights(kernel, v, g.neighbours(v), i)) {
      const auto coupled = detail::rewire(g, v, i, target);
      out.push_back({mask, mask_from_graph(coupled.graph), w * f});
    }
  });
  return out;
}

/// Exact law of G^(v,i) over edge masks.
inline FiniteLaw enumerate_coupled_law(const EdgeProbabilityMatrix& kernel, Vertex v, std::size_t i) {
  FiniteLaw law;
  for (const auto& t : enumerate_coupled_transitions(kernel, v, i))
    law.add({static_cast<std::int64_t>(t.to)}, t.probability);
  return law;
}

/// Law of G given D(v) = i over edge masks.
inline FiniteLaw conditional_graph_law(const EdgeProbabilityMatrix& kernel, Vertex v, std::size_t i) {
  FiniteLaw law;
  for_each_graph(kernel, [&](const Graph& g, std::uint64_t mask, double w) {
    if (g.degree(v) == i) law.add({static_cast<std::int64_t>(mask)}, w);
  });
  return law.conditioned([](const Outcome&) { return true; });
}

/// Exact E|(W^i_j - W_j)(W^i_k - W_k)| over the size-biased index and the coupling.
inline double exact_coupling_moment(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel, std::size_t i,
                                    std::size_t j, std::size_t k) {
  const auto index = size_biased_index_probs(kernel, sel[i]);
  double total = 0.0;
  for (Vertex v = 0; v < kernel.n(); ++v) {
    if (index[v] <= 0.0) continue;
    for (const auto& t : enumerate_coupled_transitions(kernel, v, sel[i])) {
      const auto before = selected_counts(graph_from_mask(kernel.n(), t.from), sel);
      const auto after = selected_counts(graph_from_mask(kernel.n(), t.to), sel);
      total += index[v] * t.probability * std::abs((after[j] - before[j]) * (after[k] - before[k]));
    }
  }
  return total;
}

/// Exact covariance matrix of (W_{d_1}, ..., W_{d_p}).
inline Matrix enumerate_count_covariance(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel) {
  const std::size_t p = sel.size();
  std::vector<double> mean(p, 0.0);
  Matrix second(p, p);
  for_each_graph(kernel, [&](const Graph& g, std::uint64_t, double w) {
    const auto c = selected_counts(g, sel);
    for (std::size_t a = 0; a < p; ++a) {
      mean[a] += w * c[a];
      for (std::size_t b = 0; b < p; ++b) second(a, b) += w * c[a] * c[b];
    }
  });
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) second(a, b) -= mean[a] * mean[b];
  return second;
}

} // namespace irgdeg
