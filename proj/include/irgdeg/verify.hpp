#pragma once

// Oracle-backed verification suites shared by the CLI and the acceptance tests.

#include <cmath>
#include <string>
#include <vector>

#include "coupling.hpp"
#include "exact_oracle.hpp"
#include "normal_bound.hpp"
#include "poisson_bound.hpp"

namespace irgdeg {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Kernel with independent Uniform[0,1) entries above the diagonal.
inline EdgeProbabilityMatrix random_kernel(std::size_t n, Seed seed) {
  Rng rng(seed);
  return EdgeProbabilityMatrix::from_function(n, [&](Vertex, Vertex) { return rng.uniform(); });
}

/// Largest |sum f - 1| over every vertex, every realizable neighbourhood x_d and every
/// target degree i with q_{v,i} > 0.
inline double max_normalization_error(const EdgeProbabilityMatrix& kernel) {
  const std::size_t n = kernel.n();
  double worst = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    const auto q = degree_pmf(kernel, v).probs;
    const auto pool = others(n, v);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pool.size()); ++bits) {
      VertexSet xd;
      double weight = 1.0;
      for (std::size_t t = 0; t < pool.size(); ++t) {
        const double p = kernel(v, pool[t]);
        if (bits >> t & 1U) {
          xd.push_back(pool[t]);
          weight *= p;
        } else {
          weight *= 1.0 - p;
        }
      }
      if (weight <= 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (q[i] <= 0.0 || i == xd.size()) continue;
        double sum = 0.0;
        for (const auto& [target, f] : transition_weights(kernel, v, xd, i)) sum += f;
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  }
  return worst;
}

/// Largest pointwise gap between the exact coupled law and L(G | D(v) = i) over all (v, i).
inline double max_coupling_law_error(const EdgeProbabilityMatrix& kernel) {
  double worst = 0.0;
  for (Vertex v = 0; v < kernel.n(); ++v) {
    const auto q = degree_pmf(kernel, v).probs;
    for (std::size_t i = 0; i < kernel.n(); ++i) {
      if (q[i] <= 0.0) continue;
      const auto coupled = enumerate_coupled_law(kernel, v, i);
      const auto target = conditional_graph_law(kernel, v, i);
      for (const auto& [x, w] : coupled) worst = std::max(worst, std::abs(w - target(x)));
      for (const auto& [x, w] : target) worst = std::max(worst, std::abs(w - coupled(x)));
    }
  }
  return worst;
}

/// Exact |E h(Sigma_0^{-1/2}(W - lambda)) - Nh| for h(x) = prod_l cos(x_l), where Nh = e^{-p/2}.
inline double exact_cosine_discrepancy(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel) {
  const auto lambda = lambda_vector(kernel, sel);
  const Matrix scale = inv_sqrt(covariance_sigma0(kernel, sel));
  double expectation = 0.0;
  for_each_graph(kernel, [&](const Graph& g, std::uint64_t, double w) {
    auto centred = selected_counts(g, sel);
    for (std::size_t i = 0; i < sel.size(); ++i) centred[i] -= lambda[i];
    double h = 1.0;
    for (double x : scale.apply(centred)) h *= std::cos(x);
    expectation += w * h;
  });
  return std::abs(expectation - std::exp(-0.5 * static_cast<double>(sel.size())));
}

inline std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline std::vector<CheckResult> verify_coupling_suite(std::size_t n, std::size_t kernels, Seed seed) {
  std::vector<CheckResult> out;
  double norm = 0.0, law = 0.0;
  for (std::size_t k = 0; k < kernels; ++k) {
    const auto kernel = random_kernel(n, derive_seed(seed, k));
    norm = std::max(norm, max_normalization_error(kernel));
    law = std::max(law, max_coupling_law_error(kernel));
  }
  out.push_back({"coupling: f+/f- weights sum to 1", norm <= 1e-10, "max error " + fmt_sci(norm)});
  out.push_back({"coupling: coupled law = conditional law", law <= 1e-10, "max error " + fmt_sci(law)});
  return out;
}

inline std::vector<CheckResult> verify_covariance_suite(std::size_t n, std::size_t kernels, Seed seed) {
  double worst = 0.0;
  for (std::size_t k = 0; k < kernels; ++k) {
    const auto kernel = random_kernel(n, derive_seed(seed, k));
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    const DegreeSelection sel(all, n);
    worst = std::max(worst, (covariance_exact(kernel, sel) - enumerate_count_covariance(kernel, sel)).max_abs());
  }
  return {{"covariance: closed form = enumeration", worst <= 1e-10, "max error " + fmt_sci(worst)}};
}

inline std::vector<CheckResult> verify_poisson_suite(std::size_t n, std::size_t kernels, Seed seed) {
  bool process = true, compound = true, monotone = true;
  double slack = 1.0;
  for (std::size_t k = 0; k < kernels; ++k) {
    const auto kernel = random_kernel(n, derive_seed(seed, k));
    for (std::size_t m = 1; m < n; ++m) {
      const auto xi = verify_poisson_process(kernel, m);
      const auto dm = verify_compound_poisson(kernel, m);
      process = process && xi.holds();
      compound = compound && dm.holds();
      monotone = monotone && dm.tv <= xi.tv + 1e-12;
      slack = std::min(slack, xi.bound.total() - xi.tv);
    }
  }
  return {{"poisson: TV(Xi_M, Po) <= b1 + b2", process, "min margin " + fmt_sci(slack)},
          {"poisson: TV(D_M, Y_M) <= b1 + b2", compound, ""},
          {"poisson: TV(D_M, Y_M) <= TV(Xi_M, Po)", monotone, ""}};
}

inline std::vector<CheckResult> verify_normal_suite(std::size_t n, std::size_t kernels, Seed seed) {
  bool ok = true;
  std::size_t used = 0;
  Rng pick(seed);
  for (std::size_t k = 0; used < kernels && k < 50 * kernels; ++k) {
    const auto kernel = random_kernel(n, derive_seed(seed, k));
    const std::size_t p = 1 + pick.below(2);
    std::vector<std::size_t> degs;
    while (degs.size() < p) {
      const auto d = static_cast<std::size_t>(pick.below(n));
      if (std::find(degs.begin(), degs.end(), d) == degs.end()) degs.push_back(d);
    }
    const DegreeSelection sel(degs, n);
    try {
      const auto report = bound_components(kernel, sel);
      const double lhs = exact_cosine_discrepancy(kernel, sel);
      ok = ok && lhs <= report.total(1.0, 1.0);
      ++used;
    } catch (const ValidationError&) {
      // Sigma_0 not positive definite or tau undefined: not an admissible instance.
    }
  }
  return {{"normal: |E h - Nh| <= bound (cosine h)", ok && used == kernels,
           std::to_string(used) + " admissible kernels"}};
}

inline std::vector<CheckResult> verify_all(std::size_t n, Seed seed) {
  std::vector<CheckResult> out;
  for (auto suite : {verify_coupling_suite(n, 5, seed), verify_covariance_suite(n, 5, seed),
                     verify_poisson_suite(n, 5, seed), verify_normal_suite(n, 5, seed)})
    out.insert(out.end(), suite.begin(), suite.end());
  return out;
}

} // namespace irgdeg
