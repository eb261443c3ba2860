// Command-line front end. Vertex labels on the command line and in output are 1-based.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <irgdeg/irgdeg.hpp>

using namespace irgdeg;
using nlohmann::json;

namespace {

constexpr int kValidationExit = 1;
constexpr int kVerificationExit = 2;

struct Globals {
  std::string kernel_path;
  Seed seed = 1;
  std::string out_dir;
  unsigned threads = 1;
  std::string model = "m1";
  std::size_t n = 100;
};

ModelSpec resolve_spec(const Globals& g) {
  if (!g.kernel_path.empty()) {
    std::ifstream in(g.kernel_path);
    require(in.good(), "cannot open kernel file " + g.kernel_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ValidationError("kernel json: " + std::string(e.what()));
    }
    return model_spec_from_json(j);
  }
  return model_spec_from_json(json{{"model", g.model}, {"n", g.n}});
}

EdgeProbabilityMatrix resolve_kernel(const Globals& g) {
  require(!g.kernel_path.empty(), "--kernel <json> is required");
  return build_kernel(resolve_spec(g));
}

Vertex to_index(std::size_t label, std::size_t n) {
  require(label >= 1 && label <= n, "vertex label " + std::to_string(label) + " outside [1, n]");
  return static_cast<Vertex>(label - 1);
}

json edges_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const auto& [u, v] : edges) out.push_back({u + 1, v + 1});
  return out;
}

/// Writes to <out>/<name> when --out is given, otherwise to stdout.
void emit(const Globals& g, const std::string& name, const std::string& body) {
  if (g.out_dir.empty()) {
    std::cout << body;
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(g.out_dir, ec);
  require(!ec, "cannot create output directory " + g.out_dir + ": " + ec.message());
  const auto path = std::filesystem::path(g.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  require(out.good(), "cannot write " + path.string());
  std::cerr << "wrote " << path.string() << "\n";
}

int print_checks(const std::vector<CheckResult>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << "\n";
    all = all && c.passed;
  }
  return all ? 0 : kVerificationExit;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree counts in inhomogeneous random graphs: sampling, couplings and approximation bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--kernel", g.kernel_path, "Kernel configuration (JSON)");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out_dir, "Output directory (default: stdout)");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");

  auto* sample = app.add_subcommand("sample", "Sample one graph and print its degree statistics");

  auto* pmf = app.add_subcommand("pmf", "Exact degree pmf of a vertex as CSV");
  std::size_t pmf_vertex = 1;
  std::vector<std::size_t> pmf_excluded;
  pmf->add_option("--vertex", pmf_vertex, "Vertex label (1-based)")->required();
  pmf->add_option("--exclude", pmf_excluded, "Vertices removed before computing the law")->delimiter(',');

  auto* couple = app.add_subcommand("couple", "Sample a graph and apply the size-biased coupling at (vertex, degree)");
  std::size_t couple_vertex = 1, couple_degree = 0;
  couple->add_option("--vertex", couple_vertex, "Vertex label (1-based)")->required();
  couple->add_option("--degree", couple_degree, "Target degree")->required();

  auto* bounds = app.add_subcommand("bounds", "Approximation bounds");
  bounds->require_subcommand(1);
  auto* bounds_normal = bounds->add_subcommand("normal", "Multivariate normal bound for degree counts");
  std::vector<std::size_t> normal_degrees;
  double d2 = 1.0, d3 = 1.0;
  bounds_normal->add_option("--degrees", normal_degrees, "Distinct degrees d_1,...,d_p")->delimiter(',')->required();
  bounds_normal->add_option("--d2", d2, "Bound on ||D^2 h||");
  bounds_normal->add_option("--d3", d3, "Bound on ||D^3 h||");
  auto* bounds_poisson = bounds->add_subcommand("poisson", "Poisson process bound for the truncated degrees");
  std::size_t threshold = 1;
  bounds_poisson->add_option("--M", threshold, "Degree threshold M")->required();

  auto* verify = app.add_subcommand("verify", "Run oracle-backed checks on random kernels");
  verify->require_subcommand(1);
  std::size_t verify_n = 4, verify_kernels = 5;
  for (const char* name : {"all", "coupling", "covariance", "poisson"}) {
    auto* s = verify->add_subcommand(name, std::string("verification suite: ") + name);
    s->add_option("--n", verify_n, "Vertices (at most 5)");
    s->add_option("--kernels", verify_kernels, "Random kernels per suite");
  }

  auto* experiment = app.add_subcommand("experiment", "Simulation studies");
  experiment->require_subcommand(1);
  std::size_t reps = 10000, qq_degree = 0;
  bool full_range = false, svg = false;
  for (const char* name : {"corr", "powerlaw", "qq"}) {
    auto* s = experiment->add_subcommand(name, std::string("experiment: ") + name);
    s->add_option("--model", g.model, "m1|m2|m3|m4 when no --kernel is given");
    s->add_option("--n", g.n, "Vertices when no --kernel is given");
    s->add_option("--reps", reps, "Replications");
    s->add_flag("--svg", svg, "Also write an SVG plot");
    if (std::string(name) == "corr") s->add_flag("--full-range", full_range, "Include degrees with zero variance");
    if (std::string(name) == "qq") s->add_option("--degree", qq_degree, "Degree d of the count W_d")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationExit;
  }

  try {
    if (*sample) {
      const auto kernel = resolve_kernel(g);
      const auto graph = sample_graph(kernel, g.seed);
      const auto [d, counts] = degree_statistics(graph);
      json out{{"n", graph.n()}, {"seed", g.seed}, {"edges", edges_json(graph.edges())},
               {"degrees", d}, {"W", counts.w}, {"Z", counts.z}};
      emit(g, "sample.json", out.dump(2) + "\n");
    } else if (*pmf) {
      const auto kernel = resolve_kernel(g);
      std::vector<Vertex> excluded;
      for (auto x : pmf_excluded) excluded.push_back(to_index(x, kernel.n()));
      const auto law = degree_pmf(kernel, to_index(pmf_vertex, kernel.n()), excluded);
      std::ostringstream os;
      os.precision(17);
      os << "degree,prob\n";
      for (std::size_t k = 0; k < law.support_size(); ++k) os << k << "," << law.probs[k] << "\n";
      emit(g, "pmf.csv", os.str());
    } else if (*couple) {
      const auto kernel = resolve_kernel(g);
      const auto graph = sample_graph(kernel, derive_seed(g.seed, 0));
      const Vertex v = to_index(couple_vertex, kernel.n());
      const auto outcome = couple_vertex_degree(graph, kernel, v, couple_degree, derive_seed(g.seed, 1));
      json out{{"vertex", couple_vertex}, {"degree", couple_degree}, {"original_degree", graph.degree(v)},
               {"removed", edges_json(outcome.removed)}, {"added", edges_json(outcome.added)},
               {"edges", edges_json(outcome.graph.edges())}};
      emit(g, "couple.json", out.dump(2) + "\n");
    } else if (*bounds_normal) {
      const auto kernel = resolve_kernel(g);
      const DegreeSelection sel(normal_degrees, kernel.n());
      const auto r = bound_components(kernel, sel);
      json s_pairs = json::array();
      for (std::size_t i = 0; i < sel.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < sel.size(); ++j) row.push_back(r.S_pairs(i, j));
        s_pairs.push_back(row);
      }
      json out{{"degrees", r.degrees}, {"lambda", r.lambda}, {"B", r.B}, {"S", r.S}, {"S_pairs", s_pairs},
               {"tau", r.tau}, {"M", r.bigM}, {"d2_coeff", r.d2_coeff}, {"d3_coeff", r.d3_coeff},
               {"d2_norm", d2}, {"d3_norm", d3}, {"total", r.total(d2, d3)}};
      emit(g, "normal_bound.json", out.dump(2) + "\n");
    } else if (*bounds_poisson) {
      const auto kernel = resolve_kernel(g);
      const auto r = poisson_process_bound(kernel, threshold);
      json out{{"M", r.threshold}, {"b1", r.b1}, {"b2", r.b2}, {"total", r.total()}};
      emit(g, "poisson_bound.json", out.dump(2) + "\n");
    } else if (*verify) {
      require(verify_n >= 2 && verify_n <= kMaxEnumerationVertices, "verify: --n must lie in [2, 5]");
      const std::string which = verify->get_subcommands().front()->get_name();
      if (which == "all") return print_checks(verify_all(verify_n, g.seed));
      if (which == "coupling") return print_checks(verify_coupling_suite(verify_n, verify_kernels, g.seed));
      if (which == "covariance") return print_checks(verify_covariance_suite(verify_n, verify_kernels, g.seed));
      return print_checks(verify_poisson_suite(verify_n, verify_kernels, g.seed));
    } else if (*experiment) {
      ExperimentConfig cfg;
      cfg.model = resolve_spec(g);
      cfg.replications = reps;
      cfg.seed = g.seed;
      cfg.threads = g.threads;
      cfg.full_range = full_range;
      const std::string which = experiment->get_subcommands().front()->get_name();
      const std::string tag = std::string(model_name(cfg.model.model)) + "_n" + std::to_string(cfg.model.n);
      if (which == "corr") {
        const auto res = run_correlation_experiment(cfg);
        emit(g, "corr_" + tag + ".csv", correlation_csv(res));
        if (svg) {
          // W_k against W_{k+1}: neighbouring-count correlation along the first off-diagonal.
          std::vector<std::pair<double, double>> pts;
          for (std::size_t a = 0; a + 1 < res.dim(); ++a)
            if (auto c = res.corr_at(a, a + 1)) pts.emplace_back(static_cast<double>(res.degrees[a]), *c);
          if (!pts.empty())
            emit(g, "corr_" + tag + ".svg", emit_svg(pts, {"k", "corr(W_k, W_k+1)", false, "neighbouring counts"}));
        }
      } else if (which == "powerlaw") {
        const auto t = run_powerlaw_experiment(cfg);
        emit(g, "powerlaw_" + tag + ".csv", powerlaw_csv(t));
        if (svg) {
          std::vector<std::pair<double, double>> pts;
          for (std::size_t k = 0; k < t.d.size(); ++k) pts.emplace_back(static_cast<double>(t.d[k]), t.z[k]);
          emit(g, "powerlaw_" + tag + ".svg", emit_svg(pts, {"d", "Z_d", true, "degree tail"}));
        }
      } else {
        const auto pts = qq_data(cfg, qq_degree);
        emit(g, "qq_" + tag + "_d" + std::to_string(qq_degree) + ".csv", qq_csv(pts));
        if (svg) {
          std::vector<std::pair<double, double>> xy;
          for (const auto& p : pts) xy.emplace_back(p.normal_quantile, p.sample_quantile);
          emit(g, "qq_" + tag + "_d" + std::to_string(qq_degree) + ".svg",
               emit_svg(xy, {"normal quantile", "standardized W_d", false, "QQ plot"}));
        }
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationExit;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerificationExit;
  }
  return 0;
}
