#pragma once

// Simulation harness: degree-count correlations, quantile-quantile data and
// degree-tail ("pseudo power law") tables, plus CSV and SVG writers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "graph.hpp"
#include "kernel.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace irgdeg {

struct ExperimentConfig {
  ModelSpec model;
  std::size_t replications = 10000;
  Seed seed = 1;
  unsigned threads = 1;
  bool full_range = false; // correlation over all degrees 0..n-1, not only those that vary
};

namespace detail {

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline void check_config(const ExperimentConfig& cfg) {
  require(cfg.replications >= 1, "experiment: replications must be at least 1");
  require(cfg.model.n >= 2, "experiment: n must be at least 2");
}

} // namespace detail

/// counts[r][i] = W_i in replication r. Replication r uses substream r of the master seed.
inline std::vector<std::vector<std::uint32_t>> sample_degree_counts(const EdgeProbabilityMatrix& kernel,
                                                                    std::size_t replications, Seed seed,
                                                                    unsigned threads) {
  std::vector<std::vector<std::uint32_t>> counts(replications);
  parallel_for(replications, threads, [&](std::size_t r) {
    const auto g = sample_graph(kernel, derive_seed(seed, r));
    std::vector<std::uint32_t> w(kernel.n(), 0);
    for (Vertex v = 0; v < g.n(); ++v) ++w[g.degree(v)];
    counts[r] = std::move(w);
  });
  return counts;
}

/// Pearson correlations of W_i and W_j across replications, with Fisher-z standard errors.
struct CorrelationResult {
  std::vector<std::size_t> degrees;           // degree labels of rows/columns
  std::vector<std::optional<double>> corr;    // row major; empty where a variance is 0
  std::vector<std::optional<double>> se;
  std::size_t replications = 0;

  std::size_t dim() const noexcept { return degrees.size(); }
  std::optional<double> corr_at(std::size_t a, std::size_t b) const { return corr[a * dim() + b]; }
  std::optional<double> se_at(std::size_t a, std::size_t b) const { return se[a * dim() + b]; }

  /// Position of degree d among the rows, if present.
  std::optional<std::size_t> index_of(std::size_t d) const {
    const auto it = std::find(degrees.begin(), degrees.end(), d);
    if (it == degrees.end()) return std::nullopt;
    return static_cast<std::size_t>(it - degrees.begin());
  }

  double max_offdiag_abs() const {
    double m = 0.0;
    for (std::size_t a = 0; a < dim(); ++a)
      for (std::size_t b = 0; b < dim(); ++b)
        if (a != b && corr_at(a, b)) m = std::max(m, std::abs(*corr_at(a, b)));
    return m;
  }
};

inline CorrelationResult correlation_from_counts(const std::vector<std::vector<std::uint32_t>>& counts,
                                                 bool full_range) {
  require(!counts.empty(), "correlation: no replications");
  const std::size_t n = counts.front().size();
  const auto reps = static_cast<double>(counts.size());
  std::vector<double> mean(n, 0.0);
  for (const auto& w : counts)
    for (std::size_t i = 0; i < n; ++i) mean[i] += w[i];
  for (auto& m : mean) m /= reps;
  std::vector<double> var(n, 0.0);
  for (const auto& w : counts)
    for (std::size_t i = 0; i < n; ++i) var[i] += (w[i] - mean[i]) * (w[i] - mean[i]);

  CorrelationResult res;
  res.replications = counts.size();
  for (std::size_t i = 0; i < n; ++i)
    if (full_range || var[i] > 0.0) res.degrees.push_back(i);
  const std::size_t k = res.degrees.size();
  res.corr.assign(k * k, std::nullopt);
  res.se.assign(k * k, std::nullopt);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      const std::size_t i = res.degrees[a], j = res.degrees[b];
      if (var[i] <= 0.0 || var[j] <= 0.0) continue;
      double cov = 0.0;
      for (const auto& w : counts) cov += (w[i] - mean[i]) * (w[j] - mean[j]);
      const double r = a == b ? 1.0 : std::clamp(cov / std::sqrt(var[i] * var[j]), -1.0, 1.0);
      res.corr[a * k + b] = res.corr[b * k + a] = r;
      if (counts.size() > 3) res.se[a * k + b] = res.se[b * k + a] = (1.0 - r * r) / std::sqrt(reps - 3.0);
    }
  }
  return res;
}

inline CorrelationResult run_correlation_experiment(const ExperimentConfig& cfg) {
  detail::check_config(cfg);
  const auto kernel = build_kernel(cfg.model);
  return correlation_from_counts(sample_degree_counts(kernel, cfg.replications, cfg.seed, cfg.threads), cfg.full_range);
}

/// CSV with columns i,j,corr,se; undefined entries are written as NA.
inline std::string correlation_csv(const CorrelationResult& res) {
  std::string out = "i,j,corr,se\n";
  auto cell = [](const std::optional<double>& x) { return x ? detail::fmt_double(*x) : std::string("NA"); };
  for (std::size_t a = 0; a < res.dim(); ++a)
    for (std::size_t b = 0; b < res.dim(); ++b)
      out += std::to_string(res.degrees[a]) + "," + std::to_string(res.degrees[b]) + "," + cell(res.corr_at(a, b)) +
             "," + cell(res.se_at(a, b)) + "\n";
  return out;
}

/// Z_d (vertices of degree at least d) for d = 1..max degree, averaged over replications.
struct PowerLawTable {
  std::vector<std::size_t> d;
  std::vector<double> z;
};

inline PowerLawTable run_powerlaw_experiment(const ExperimentConfig& cfg) {
  detail::check_config(cfg);
  const auto kernel = build_kernel(cfg.model);
  const auto counts = sample_degree_counts(kernel, cfg.replications, cfg.seed, cfg.threads);
  const std::size_t n = kernel.n();
  std::vector<double> z(n, 0.0);
  std::size_t max_degree = 0;
  for (const auto& w : counts) {
    std::size_t acc = 0;
    for (std::size_t k = n; k-- > 0;) {
      acc += w[k];
      z[k] += static_cast<double>(acc);
      if (w[k] > 0) max_degree = std::max(max_degree, k);
    }
  }
  PowerLawTable t;
  for (std::size_t k = 1; k <= max_degree; ++k) {
    t.d.push_back(k);
    t.z.push_back(z[k] / static_cast<double>(counts.size()));
  }
  return t;
}

/// CSV with columns d,Z_d,log10_d,log10_Z.
inline std::string powerlaw_csv(const PowerLawTable& t) {
  std::string out = "d,Z_d,log10_d,log10_Z\n";
  for (std::size_t k = 0; k < t.d.size(); ++k)
    out += std::to_string(t.d[k]) + "," + detail::fmt_double(t.z[k]) + "," +
           detail::fmt_double(std::log10(static_cast<double>(t.d[k]))) + "," + detail::fmt_double(std::log10(t.z[k])) +
           "\n";
  return out;
}

struct QQPoint {
  double normal_quantile;
  double sample_quantile;
};

/// Sorted, standardized sample against Phi^{-1}((k - 0.5) / R).
inline std::vector<QQPoint> qq_data(std::vector<double> sample) {
  require(sample.size() >= 2, "qq_data: need at least two observations");
  const auto r = static_cast<double>(sample.size());
  double mean = 0.0;
  for (double x : sample) mean += x;
  mean /= r;
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (r - 1.0));
  require(sd > 0.0, "qq_data: sample has zero variance");
  std::sort(sample.begin(), sample.end());
  const boost::math::normal_distribution<double> phi;
  std::vector<QQPoint> out(sample.size());
  for (std::size_t k = 0; k < sample.size(); ++k)
    out[k] = {boost::math::quantile(phi, (static_cast<double>(k) + 0.5) / r), (sample[k] - mean) / sd};
  return out;
}

/// QQ data for the count W_d over cfg.replications graphs (at least 100).
inline std::vector<QQPoint> qq_data(const ExperimentConfig& cfg, std::size_t degree) {
  detail::check_config(cfg);
  require(cfg.replications >= 100, "qq_data: need at least 100 replications");
  require(degree < cfg.model.n, "qq_data: degree outside [0, n-1]");
  const auto kernel = build_kernel(cfg.model);
  const auto counts = sample_degree_counts(kernel, cfg.replications, cfg.seed, cfg.threads);
  std::vector<double> sample;
  sample.reserve(counts.size());
  for (const auto& w : counts) sample.push_back(w[degree]);
  return qq_data(std::move(sample));
}

inline std::string qq_csv(const std::vector<QQPoint>& pts) {
  std::string out = "normal_quantile,sample_quantile\n";
  for (const auto& p : pts) out += detail::fmt_double(p.normal_quantile) + "," + detail::fmt_double(p.sample_quantile) + "\n";
  return out;
}

struct AxesSpec {
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_log = false;
  std::string title;
};

/// Standalone scatter plot; one <circle> per point. Log axes plot log10 of positive values.
inline std::string emit_svg(const std::vector<std::pair<double, double>>& table, const AxesSpec& axes) {
  require(!table.empty(), "emit_svg: empty table");
  std::vector<std::pair<double, double>> pts;
  for (auto [x, y] : table) {
    if (axes.log_log) {
      require(x > 0.0 && y > 0.0, "emit_svg: log-log axes need positive values");
      x = std::log10(x);
      y = std::log10(y);
    }
    pts.emplace_back(x, y);
  }
  auto [xmin, xmax] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first < b.first; });
  auto [ymin, ymax] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.second < b.second; });
  const double x0 = xmin->first, x1 = xmax->first > x0 ? xmax->first : x0 + 1.0;
  const double y0 = ymin->second, y1 = ymax->second > y0 ? ymax->second : y0 + 1.0;
  constexpr double width = 640, height = 480, left = 70, right = 20, top = 40, bottom = 60;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
  auto sy = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };
  const std::string xl = axes.log_log ? "log10(" + axes.x_label + ")" : axes.x_label;
  const std::string yl = axes.log_log ? "log10(" + axes.y_label + ")" : axes.y_label;
  auto f = detail::fmt_double;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  if (!axes.title.empty()) s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + axes.title + "</text>\n";
  s += "<line x1=\"70\" y1=\"420\" x2=\"620\" y2=\"420\" stroke=\"black\"/>\n";
  s += "<line x1=\"70\" y1=\"40\" x2=\"70\" y2=\"420\" stroke=\"black\"/>\n";
  s += "<text x=\"70\" y=\"438\" font-size=\"11\" text-anchor=\"middle\">" + f(x0) + "</text>\n";
  s += "<text x=\"620\" y=\"438\" font-size=\"11\" text-anchor=\"middle\">" + f(x1) + "</text>\n";
  s += "<text x=\"64\" y=\"424\" font-size=\"11\" text-anchor=\"end\">" + f(y0) + "</text>\n";
  s += "<text x=\"64\" y=\"44\" font-size=\"11\" text-anchor=\"end\">" + f(y1) + "</text>\n";
  s += "<text x=\"345\" y=\"465\" font-size=\"14\" text-anchor=\"middle\">" + xl + "</text>\n";
  s += "<text x=\"18\" y=\"230\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 230)\">" + yl + "</text>\n";
  for (const auto& [x, y] : pts)
    s += "<circle cx=\"" + f(sx(x)) + "\" cy=\"" + f(sy(y)) + "\" r=\"3\" fill=\"steelblue\"/>\n";
  s += "</svg>\n";
  return s;
}

} // namespace irgdeg
