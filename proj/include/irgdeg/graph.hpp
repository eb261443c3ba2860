#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "kernel.hpp"
#include "rng.hpp"

namespace irgdeg {

using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph: sorted edge list (u < v) plus sorted neighbour lists.
class Graph {
public:
  Graph() = default;

  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adj_(n) {
    for (auto& e : edges_) {
      require(e.first != e.second, "graph: self-loop at vertex " + std::to_string(e.first));
      require(e.first < n && e.second < n, "graph: edge endpoint out of range");
      if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges_.begin(), edges_.end());
    require(std::adjacent_find(edges_.begin(), edges_.end()) == edges_.end(), "graph: duplicate edge");
    for (const auto& [u, v] : edges_) {
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
  }

  std::size_t n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Vertex>& neighbours(Vertex v) const noexcept { return adj_[v]; }
  std::size_t degree(Vertex v) const noexcept { return adj_[v].size(); }

  bool adjacent(Vertex u, Vertex v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
};

/// Draws every pair u < v in lexicographic order, one uniform per pair.
inline Graph sample_graph(const EdgeProbabilityMatrix& kernel, Seed seed) {
  Rng rng(seed);
  const std::size_t n = kernel.n();
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.uniform() < kernel(u, v)) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

using DegreeVector = std::vector<std::size_t>;

/// w[i] = #vertices of degree i, z[k] = #vertices of degree >= k; both of length n.
struct DegreeCounts {
  std::vector<std::size_t> w;
  std::vector<std::size_t> z;
};

inline DegreeVector degrees(const Graph& g) {
  DegreeVector d(g.n());
  for (Vertex v = 0; v < g.n(); ++v) d[v] = g.degree(v);
  return d;
}

inline DegreeCounts degree_counts(const DegreeVector& d) {
  const std::size_t n = d.size();
  DegreeCounts c{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0)};
  for (auto x : d) {
    require(x < n, "degree " + std::to_string(x) + " exceeds n-1");
    ++c.w[x];
  }
  std::size_t acc = 0;
  for (std::size_t k = n; k-- > 0;) {
    acc += c.w[k];
    c.z[k] = acc;
  }
  return c;
}

inline std::pair<DegreeVector, DegreeCounts> degree_statistics(const Graph& g) {
  auto d = degrees(g);
  auto c = degree_counts(d);
  return {std::move(d), std::move(c)};
}

/// Entry v is d[v] when d[v] >= threshold, else 0.
inline DegreeVector truncate_degrees(const DegreeVector& d, std::size_t threshold) {
  require(!d.empty() && threshold <= d.size() - 1,
          "truncate_degrees: threshold " + std::to_string(threshold) + " outside [0, n-1]");
  DegreeVector out(d.size());
  std::transform(d.begin(), d.end(), out.begin(), [threshold](std::size_t x) { return x >= threshold ? x : 0; });
  return out;
}

} // namespace irgdeg
