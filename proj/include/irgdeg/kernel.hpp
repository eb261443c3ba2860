#pragma once

// Edge-probability kernels of the independent-edge model G(n, {p_uv}).
//
// Vertices are indexed 0..n-1 in code. The preset models are written in terms
// of the 1-based label u+1 so that M3 and M4 follow their published formulas.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace irgdeg {

using Vertex = std::uint32_t;

/// Symmetric n x n matrix of edge probabilities with a zero diagonal.
class EdgeProbabilityMatrix {
public:
  EdgeProbabilityMatrix() = default;

  /// Validates symmetry, range and diagonal; the diagnostic names the first bad entry.
  EdgeProbabilityMatrix(std::size_t n, std::vector<double> row_major) : n_(n), p_(std::move(row_major)) {
    require(n >= 2, "kernel: n must be at least 2, got " + std::to_string(n));
    require(p_.size() == n * n, "kernel: expected " + std::to_string(n * n) + " entries, got " +
                                    std::to_string(p_.size()));
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        const double x = p_[u * n + v];
        if (!(x >= 0.0 && x <= 1.0))
          throw ValidationError("kernel: entry (" + std::to_string(u) + "," + std::to_string(v) + ") = " +
                                format(x) + " is outside [0,1]");
        if (u == v && x != 0.0)
          throw ValidationError("kernel: diagonal entry (" + std::to_string(u) + "," + std::to_string(u) +
                                ") = " + format(x) + " must be 0");
        if (v > u && x != p_[v * n + u])
          throw ValidationError("kernel: entry (" + std::to_string(u) + "," + std::to_string(v) + ") = " +
                                format(x) + " differs from its transpose " + format(p_[v * n + u]));
      }
    }
  }

  template <class F>
  static EdgeProbabilityMatrix from_function(std::size_t n, F&& prob) {
    std::vector<double> p(n * n, 0.0);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) p[u * n + v] = p[v * n + u] = prob(static_cast<Vertex>(u), static_cast<Vertex>(v));
    return EdgeProbabilityMatrix(n, std::move(p));
  }

  std::size_t n() const noexcept { return n_; }
  double operator()(Vertex u, Vertex v) const noexcept { return p_[u * n_ + v]; }
  const std::vector<double>& data() const noexcept { return p_; }

  /// Probabilities p_{v,u} for u != v, in increasing u, skipping `skip_a` and `skip_b`.
  std::vector<double> row_without(Vertex v, std::size_t skip_a = SIZE_MAX, std::size_t skip_b = SIZE_MAX) const {
    std::vector<double> out;
    out.reserve(n_);
    for (std::size_t u = 0; u < n_; ++u)
      if (u != v && u != skip_a && u != skip_b) out.push_back(p_[v * n_ + u]);
    return out;
  }

  friend bool operator==(const EdgeProbabilityMatrix&, const EdgeProbabilityMatrix&) = default;

private:
  static std::string format(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }

  std::size_t n_ = 0;
  std::vector<double> p_;
};

enum class Model { M1, M2, M3, M4, Homogeneous, Custom };

/// Parameters of a kernel preset. Unused fields are ignored by the chosen model.
struct ModelSpec {
  Model model = Model::M1;
  std::size_t n = 100;
  double p = 0.0;            // Homogeneous
  std::size_t band = 10;     // M2: circular distance counted as in-band
  double p_in = 0.2;         // M2
  double p_out = 1.0 / 80.0; // M2
  double rasch_first = 3.0;  // M4: constant applied to the smaller label
  double rasch_second = 10.0;
  std::vector<double> matrix; // Custom, row major n*n

  static ModelSpec preset(Model m, std::size_t n) {
    ModelSpec s;
    s.model = m;
    s.n = n;
    return s;
  }
  static ModelSpec m1(std::size_t n) { return preset(Model::M1, n); }
  static ModelSpec m2(std::size_t n) { return preset(Model::M2, n); }
  static ModelSpec m3(std::size_t n) { return preset(Model::M3, n); }
  static ModelSpec m4(std::size_t n) { return preset(Model::M4, n); }
  static ModelSpec homogeneous(std::size_t n, double p) {
    auto s = preset(Model::Homogeneous, n);
    s.p = p;
    return s;
  }
};

/// Rasch-type vertex weight: 1/(c sqrt n) for labels up to n/2, c/sqrt n above.
inline double rasch_weight(std::size_t label, std::size_t n, double c) {
  const double root = std::sqrt(static_cast<double>(n));
  return 2 * label <= n ? 1.0 / (c * root) : c / root;
}

inline std::size_t circular_distance(std::size_t u, std::size_t v, std::size_t n) {
  const std::size_t diff = u > v ? u - v : v - u;
  return std::min(diff, n - diff);
}

inline EdgeProbabilityMatrix build_kernel(const ModelSpec& spec) {
  const std::size_t n = spec.n;
  require(n >= 2, "kernel: n must be at least 2, got " + std::to_string(n));
  switch (spec.model) {
  case Model::M1:
    return EdgeProbabilityMatrix::from_function(n, [n](Vertex, Vertex) { return 1.0 / static_cast<double>(n); });
  case Model::Homogeneous:
    return EdgeProbabilityMatrix::from_function(n, [&](Vertex, Vertex) { return spec.p; });
  case Model::M2:
    return EdgeProbabilityMatrix::from_function(n, [&](Vertex u, Vertex v) {
      return circular_distance(u, v, n) <= spec.band ? spec.p_in : spec.p_out;
    });
  case Model::M3:
    return EdgeProbabilityMatrix::from_function(n, [n](Vertex u, Vertex v) {
      return static_cast<double>(std::min(u, v) + 1) / static_cast<double>(n);
    });
  case Model::M4:
    // u < v here, so the smaller label always takes the first constant.
    return EdgeProbabilityMatrix::from_function(n, [&](Vertex u, Vertex v) {
      return rasch_weight(u + 1, n, spec.rasch_first) * rasch_weight(v + 1, n, spec.rasch_second);
    });
  case Model::Custom:
    return EdgeProbabilityMatrix(n, spec.matrix);
  }
  throw ValidationError("kernel: unknown model");
}

inline const char* model_name(Model m) {
  switch (m) {
  case Model::M1: return "m1";
  case Model::M2: return "m2";
  case Model::M3: return "m3";
  case Model::M4: return "m4";
  case Model::Homogeneous: return "homogeneous";
  case Model::Custom: return "custom";
  }
  return "?";
}

} // namespace irgdeg
