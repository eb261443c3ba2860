#pragma once

// Multivariate normal approximation for degree counts W = (W_{d_1}, ..., W_{d_p}):
// exact mean and covariance, the approximating covariance Sigma_0, and the
// constants B_i, S, tau, M of the smooth-test-function error bound
//
//   |E h(Sigma_0^{-1/2}(W - lambda)) - Nh|
//     <= p^3 tau^2 ||D^2 h|| (sum_i B_i + S) + (p^5/3) tau^3 ||D^3 h|| (M + sum_i lambda_i (d_i+1)^2).
//
// Conventions: q_{v,-1} = 0; sums over pairs (u, v) run over ordered pairs u != v;
// S is evaluated for every (i, j) and the maximum enters the bound.

#include <cmath>
#include <numeric>
#include <vector>

#include "coupling.hpp"
#include "degree_dist.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace irgdeg {

/// Distinct target degrees d_1, ..., d_p in [0, n-1].
class DegreeSelection {
public:
  DegreeSelection(std::vector<std::size_t> degrees, std::size_t n) : d_(std::move(degrees)) {
    require(!d_.empty(), "degree selection: need at least one degree");
    auto sorted = d_;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "degree selection: degrees must be distinct");
    require(sorted.back() < n, "degree selection: degree " + std::to_string(sorted.back()) + " exceeds n-1");
  }

  std::size_t size() const noexcept { return d_.size(); }
  std::size_t operator[](std::size_t k) const noexcept { return d_[k]; }
  const std::vector<std::size_t>& degrees() const noexcept { return d_; }

private:
  std::vector<std::size_t> d_;
};

/// pmf of a Poisson-binomial law with one Bernoulli(p) summand removed.
/// Forward recursion for p <= 1/2 and backward otherwise keep the error from growing.
inline std::vector<double> remove_bernoulli(const std::vector<double>& pmf, double p) {
  const std::size_t m = pmf.size() - 1;
  std::vector<double> r(m, 0.0);
  if (m == 0) return r;
  if (p <= 0.5) {
    for (std::size_t k = 0; k < m; ++k) r[k] = (pmf[k] - (k > 0 ? p * r[k - 1] : 0.0)) / (1.0 - p);
  } else {
    for (std::size_t k = m; k-- > 0;) r[k] = (pmf[k + 1] - (k + 1 < m ? (1.0 - p) * r[k + 1] : 0.0)) / p;
  }
  for (auto& x : r) x = std::max(x, 0.0);
  const double total = std::accumulate(r.begin(), r.end(), 0.0);
  if (total > 0.0)
    for (auto& x : r) x /= total;
  return r;
}

/// Degree laws shared by the covariance and bound formulas.
struct DegreeLaws {
  std::vector<std::vector<double>> q; // q[v][d]
  std::vector<double> mean;           // mu_v
  std::vector<double> variance;       // Var D(v)
  std::vector<double> pbar;           // (1/(n-1)) sum_w p_wv

  explicit DegreeLaws(const EdgeProbabilityMatrix& kernel) : q(all_degree_pmfs(kernel)) {
    const std::size_t n = kernel.n();
    mean.resize(n);
    variance.resize(n);
    pbar.resize(n);
    for (Vertex v = 0; v < n; ++v) {
      const auto m = degree_moments(kernel, v);
      mean[v] = m.mean;
      variance[v] = m.variance;
      pbar[v] = m.mean / static_cast<double>(n - 1);
    }
  }

  double at(Vertex v, long d) const {
    return d < 0 || static_cast<std::size_t>(d) >= q[v].size() ? 0.0 : q[v][static_cast<std::size_t>(d)];
  }
  /// q_{v,d-1} - q_{v,d}
  double step(Vertex v, std::size_t d) const { return at(v, static_cast<long>(d) - 1) - at(v, static_cast<long>(d)); }
};

inline std::vector<double> lambda_vector(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel) {
  const DegreeLaws laws(kernel);
  std::vector<double> lambda(sel.size(), 0.0);
  for (std::size_t i = 0; i < sel.size(); ++i)
    for (Vertex v = 0; v < kernel.n(); ++v) lambda[i] += laws.at(v, static_cast<long>(sel[i]));
  return lambda;
}

/// Exact Cov(W_{d_i}, W_{d_j}).
inline Matrix covariance_exact(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel) {
  const std::size_t n = kernel.n(), p = sel.size();
  const DegreeLaws laws(kernel);
  Matrix sigma(p, p);
  auto at = [](const std::vector<double>& pmf, long d) {
    return d < 0 || static_cast<std::size_t>(d) >= pmf.size() ? 0.0 : pmf[static_cast<std::size_t>(d)];
  };
  for (std::size_t i = 0; i < p; ++i) {
    for (Vertex v = 0; v < n; ++v) {
      sigma(i, i) += laws.at(v, static_cast<long>(sel[i]));
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        sigma(i, j) -= laws.at(v, static_cast<long>(sel[i])) * laws.at(v, static_cast<long>(sel[j]));
    for (Vertex w = 0; w < n; ++w) {
      if (w == v) continue;
      const double pwv = kernel(w, v);
      const auto v_without_w = remove_bernoulli(laws.q[v], pwv);
      const auto w_without_v = remove_bernoulli(laws.q[w], pwv);
      for (std::size_t i = 0; i < p; ++i) {
        const auto di = static_cast<long>(sel[i]);
        for (std::size_t j = 0; j < p; ++j) {
          const auto dj = static_cast<long>(sel[j]);
          sigma(i, j) += pwv * at(v_without_w, di - 1) * at(w_without_v, dj - 1) +
                         (1.0 - pwv) * at(v_without_w, di) * at(w_without_v, dj) - laws.at(v, di) * laws.at(w, dj);
        }
      }
    }
  }
  return sigma;
}

/// Sigma_0: the covariance with every p_wv in the cross term replaced by sqrt(pbar_v pbar_w).
inline Matrix covariance_sigma0(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel) {
  const std::size_t n = kernel.n(), p = sel.size();
  const DegreeLaws laws(kernel);
  std::vector<double> weighted(p, 0.0); // sum_v sqrt(pbar_v) (q_{v,d-1} - q_{v,d})
  for (std::size_t i = 0; i < p; ++i)
    for (Vertex v = 0; v < n; ++v) weighted[i] += std::sqrt(laws.pbar[v]) * laws.step(v, sel[i]);
  Matrix s0(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double x = weighted[i] * weighted[j];
      for (Vertex v = 0; v < n; ++v)
        x -= laws.at(v, static_cast<long>(sel[i])) * laws.at(v, static_cast<long>(sel[j]));
      if (i == j)
        for (Vertex v = 0; v < n; ++v) x += laws.at(v, static_cast<long>(sel[i]));
      s0(i, j) = x;
    }
  }
  return s0;
}

struct NormalBoundReport {
  std::vector<std::size_t> degrees;
  std::vector<double> lambda;
  std::vector<double> B;
  double S = 0.0;
  Matrix S_pairs;      // S(i, j) for every pair; S is the maximum
  double S_heterogeneity = 0.0; // max over pairs of the |p_wv - sqrt(pbar_v pbar_w)| summand
  double tau = 0.0;
  double bigM = 0.0;
  double sum_p_squared = 0.0; // over ordered pairs u != v
  double d2_coeff = 0.0;      // multiplies ||D^2 h||
  double d3_coeff = 0.0;      // multiplies ||D^3 h||

  double total(double d2_norm, double d3_norm) const { return d2_coeff * d2_norm + d3_coeff * d3_norm; }
};

/// The right-hand side of the normal-approximation bound for given derivative norms.
inline double mvn_bound(const NormalBoundReport& r, const std::vector<double>& lambda, const DegreeSelection& sel,
                        double d2_norm, double d3_norm, std::size_t p) {
  require(d2_norm >= 0.0 && d3_norm >= 0.0, "mvn_bound: derivative norms must be non-negative");
  require(lambda.size() == sel.size() && r.B.size() == sel.size() && p == sel.size(), "mvn_bound: dimension mismatch");
  const double pd = static_cast<double>(p);
  const double sum_b = std::accumulate(r.B.begin(), r.B.end(), 0.0);
  double spread = r.bigM;
  for (std::size_t i = 0; i < p; ++i) {
    const double d1 = static_cast<double>(sel[i]) + 1.0;
    spread += lambda[i] * d1 * d1;
  }
  return std::pow(pd, 3) * r.tau * r.tau * d2_norm * (sum_b + r.S) +
         std::pow(pd, 5) / 3.0 * std::pow(r.tau, 3) * d3_norm * spread;
}

/// lambda, B, S and M; tau and the coefficients are left at zero.
inline NormalBoundReport bound_constants(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel) {
  const std::size_t n = kernel.n(), p = sel.size();
  const DegreeLaws laws(kernel);
  NormalBoundReport r;
  r.degrees = sel.degrees();
  r.lambda.assign(p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (Vertex v = 0; v < n; ++v) r.lambda[i] += laws.at(v, static_cast<long>(sel[i]));

  double sum_mu = 0.0, sum_mu3 = 0.0;
  for (double mu : laws.mean) {
    sum_mu += mu;
    sum_mu3 += mu * mu * mu;
  }
  r.bigM = std::max(sum_mu, sum_mu3);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) r.sum_p_squared += kernel(u, v) * kernel(u, v);

  r.B.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    const double d2 = static_cast<double>(sel[i]) * static_cast<double>(sel[i]);
    r.B[i] = 128.0 * std::sqrt((10.0 + 6.0 * d2) * r.bigM + (d2 + 2.0) * r.sum_p_squared * (3.0 * r.bigM + 1.0));
  }

  r.S_pairs = Matrix(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double hetero = 0.0, diag = 0.0;
      for (Vertex v = 0; v < n; ++v) {
        const double sv = laws.step(v, sel[i]);
        diag += laws.pbar[v] * std::abs(sv) * std::abs(laws.step(v, sel[j]));
        for (Vertex w = 0; w < n; ++w) {
          if (w == v) continue;
          hetero += std::abs(kernel(w, v) - std::sqrt(laws.pbar[v] * laws.pbar[w])) * std::abs(sv * laws.step(w, sel[j]));
        }
      }
      r.S_pairs(i, j) = 4.0 * r.sum_p_squared + hetero + diag;
      r.S_heterogeneity = std::max(r.S_heterogeneity, hetero);
      r.S = std::max(r.S, r.S_pairs(i, j));
    }
  }

  return r;
}

inline NormalBoundReport bound_components(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel) {
  const std::size_t n = kernel.n(), p = sel.size();
  const DegreeLaws laws(kernel);
  NormalBoundReport r = bound_constants(kernel, sel);
  double tau_denominator = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    double smallest = 1.0, mass = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double q = laws.at(v, static_cast<long>(sel[i]));
      smallest = std::min(smallest, q);
      mass += q;
    }
    tau_denominator += smallest * (1.0 - mass);
  }
  require(tau_denominator > 0.0, "bound_components: degenerate selection, sum_v min_i q_{v,d_i}(1 - sum_i q_{v,d_i}) = " +
                                     std::to_string(tau_denominator));
  r.tau = 1.0 / std::sqrt(tau_denominator);

  r.d2_coeff = mvn_bound(r, r.lambda, sel, 1.0, 0.0, p);
  r.d3_coeff = mvn_bound(r, r.lambda, sel, 0.0, 1.0, p);
  return r;
}

/// Degree counts W_{d_1..d_p} of a graph.
inline std::vector<double> selected_counts(const Graph& g, const DegreeSelection& sel) {
  std::vector<double> w(sel.size(), 0.0);
  for (Vertex v = 0; v < g.n(); ++v)
    for (std::size_t i = 0; i < sel.size(); ++i)
      if (g.degree(v) == sel[i]) w[i] += 1.0;
  return w;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t replications = 0;
};

/// Monte Carlo E|(W^i_j - W_j)(W^i_k - W_k)| with W^i the size-biased counts in coordinate i.
inline MonteCarloEstimate mc_coupling_moment(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel,
                                             std::size_t i, std::size_t j, std::size_t k, std::size_t reps, Seed seed,
                                             unsigned threads = 1) {
  require(reps >= 1, "mc_coupling_moment: need at least one replication");
  require(i < sel.size() && j < sel.size() && k < sel.size(), "mc_coupling_moment: coordinate out of range");
  size_biased_index_probs(kernel, sel[i]); // rejects lambda_i = 0 up front
  std::vector<double> values(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    const Seed s = derive_seed(seed, r);
    const Graph g = sample_graph(kernel, derive_seed(s, 0));
    const auto [outcome, index] = size_biased_count_graph(g, kernel, sel[i], derive_seed(s, 1));
    const auto before = selected_counts(g, sel);
    const auto after = selected_counts(outcome.graph, sel);
    values[r] = std::abs((after[j] - before[j]) * (after[k] - before[k]));
  });
  MonteCarloEstimate est;
  est.replications = reps;
  est.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(reps);
  if (reps > 1) {
    double ss = 0.0;
    for (double x : values) ss += (x - est.mean) * (x - est.mean);
    est.standard_error = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }
  return est;
}

/// Analytic majorant 2(d_i+1)^2 + 2 sum_v q_{v,d_i}(Var D(v) + mu_v^2) / lambda_i of the coupling moment.
inline double coupling_moment_majorant(const EdgeProbabilityMatrix& kernel, const DegreeSelection& sel, std::size_t i) {
  const DegreeLaws laws(kernel);
  const auto di = static_cast<long>(sel[i]);
  double lambda = 0.0, weighted = 0.0;
  for (Vertex v = 0; v < kernel.n(); ++v) {
    lambda += laws.at(v, di);
    weighted += laws.at(v, di) * (laws.variance[v] + laws.mean[v] * laws.mean[v]);
  }
  require(lambda > 0.0, "coupling_moment_majorant: lambda_i = 0");
  const double d1 = static_cast<double>(sel[i]) + 1.0;
  return 2.0 * d1 * d1 + 2.0 * weighted / lambda;
}

} // namespace irgdeg
