#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include <irgdeg/coupling.hpp>
#include <irgdeg/exact_oracle.hpp>
#include <irgdeg/verify.hpp>

using namespace irgdeg;

namespace {

EdgeProbabilityMatrix three(double p12, double p13, double p23) {
  return EdgeProbabilityMatrix(3, {0, p12, p13, p12, 0, p23, p13, p23, 0});
}

// Hand-picked kernel shared with tests/oracles/brute_force.py.
EdgeProbabilityMatrix five() {
  return EdgeProbabilityMatrix(5, {0,    0.15, 0.4,  0.65, 0.9,  //
                                   0.15, 0,    0.35, 0.55, 0.25, //
                                   0.4,  0.35, 0,    0.7,  0.05, //
                                   0.65, 0.55, 0.7,  0,    0.45, //
                                   0.9,  0.25, 0.05, 0.45, 0});
}

constexpr double kTwoOverTwentyOne = 0.06 / 0.62;

} // namespace

TEST(GroupedConditional, ThreeVertexExample) {
  const auto k = three(0.2, 0.7, 0.3);
  GroupedDegreeQuery q{0, {1}, {2}, {}, 1, 0, 0, 1};
  EXPECT_NEAR(grouped_conditional_prob(k, q), kTwoOverTwentyOne, 1e-15);
}

TEST(GroupedConditional, SymmetricKernelSwap) {
  const auto k = build_kernel(ModelSpec::homogeneous(6, 0.35));
  GroupedDegreeQuery q{2, {0, 1}, {3, 4, 5}, {}, 1, 2, 0, 3};
  GroupedDegreeQuery swapped{2, {3, 4, 5}, {0, 1}, {}, 2, 1, 0, 3};
  EXPECT_NEAR(grouped_conditional_prob(k, q), grouped_conditional_prob(k, swapped), 1e-15);
}

TEST(GroupedConditional, CertainEdgesGiveOne) {
  const auto k = build_kernel(ModelSpec::homogeneous(5, 1.0));
  GroupedDegreeQuery q{4, {0}, {1, 2}, {3}, 1, 2, 1, 4};
  EXPECT_DOUBLE_EQ(grouped_conditional_prob(k, q), 1.0);
}

TEST(GroupedConditional, Errors) {
  const auto k = build_kernel(ModelSpec::homogeneous(3, 0.0));
  EXPECT_THROW(grouped_conditional_prob(k, {0, {1}, {2}, {}, 1, 0, 0, 1}), ValidationError); // null event
  const auto k2 = three(0.2, 0.7, 0.3);
  EXPECT_THROW(grouped_conditional_prob(k2, {0, {1}, {}, {}, 1, 0, 0, 1}), ValidationError);      // not a partition
  EXPECT_THROW(grouped_conditional_prob(k2, {0, {1}, {2}, {}, 1, 1, 0, 1}), ValidationError);     // counts vs degree
  EXPECT_THROW(grouped_conditional_prob(k2, {0, {1}, {2}, {}, 2, 0, 0, 2}), ValidationError);     // count > size
  EXPECT_THROW(grouped_conditional_prob(k2, {0, {0, 1}, {2}, {}, 1, 0, 0, 1}), ValidationError);  // focal vertex
}

TEST(FPlus, SymmetricPair) {
  const auto k = build_kernel(ModelSpec::homogeneous(3, 0.5));
  EXPECT_NEAR(f_plus(k, 0, {1, 2}, {1}), 0.5, 1e-15);
  EXPECT_NEAR(f_plus(k, 0, {1, 2}, {2}), 0.5, 1e-15);
}

TEST(FPlus, InhomogeneousPair) {
  const auto k = three(0.2, 0.7, 0.3);
  EXPECT_NEAR(f_plus(k, 0, {1, 2}, {1}), kTwoOverTwentyOne, 1e-15);
  EXPECT_NEAR(f_plus(k, 0, {1, 2}, {2}), 1.0 - kTwoOverTwentyOne, 1e-15);
  EXPECT_NEAR(f_plus(k, 0, {1, 2}, {1}), 0.09677419354838712, 1e-15);
}

TEST(FPlus, DropToZero) {
  const auto k = five();
  EXPECT_NEAR(f_plus(k, 3, {0, 2, 4}, {}), 1.0, 1e-15);
}

TEST(FPlus, LiteralFormulaValues) {
  const auto k = five();
  EXPECT_NEAR(f_plus(k, 0, {1, 2, 4}, {2, 4}), 0.5763177751428263, 1e-14);
  EXPECT_NEAR(f_plus(k, 0, {1, 3, 4}, {3}), 0.17771925624451357, 1e-14);
}

TEST(FPlus, Errors) {
  const auto k = three(0.2, 0.7, 0.3);
  EXPECT_THROW(f_plus(k, 0, {1, 2}, {1, 2}), ValidationError);
  EXPECT_THROW(f_plus(k, 0, {1}, {2}), ValidationError);
  EXPECT_THROW(f_plus(k, 0, {2, 1}, {1}), ValidationError);
  EXPECT_THROW(f_plus(build_kernel(ModelSpec::homogeneous(3, 1.0)), 0, {1, 2}, {1}), ValidationError);
}

TEST(FMinus, FillToFullNeighbourhood) {
  const auto k = five();
  EXPECT_NEAR(f_minus(k, 1, {3}, {0, 2, 3, 4}), 1.0, 1e-14);
}

TEST(FMinus, SymmetricAndInhomogeneousPair) {
  const auto half = build_kernel(ModelSpec::homogeneous(3, 0.5));
  EXPECT_NEAR(f_minus(half, 0, {}, {1}), 0.5, 1e-15);
  EXPECT_NEAR(f_minus(half, 0, {}, {2}), 0.5, 1e-15);
  const auto k = three(0.2, 0.7, 0.3);
  EXPECT_NEAR(f_minus(k, 0, {}, {1}), 0.09677419354838712, 1e-15);
}

TEST(FMinus, LiteralFormulaValues) {
  const auto k = five();
  EXPECT_NEAR(f_minus(k, 0, {3}, {1, 3}), 0.04543494664223348, 1e-14);
  EXPECT_NEAR(f_minus(k, 0, {2}, {1, 2, 4}), 0.13285948605795517, 1e-14);
}

TEST(FMinus, Errors) {
  const auto k = three(0.2, 0.7, 0.3);
  EXPECT_THROW(f_minus(k, 0, {1}, {1}), ValidationError);
  EXPECT_THROW(f_minus(k, 0, {1}, {2}), ValidationError);
}

TEST(TransitionWeights, NormalizeForEveryNeighbourhoodAndDegree) {
  for (Seed s = 0; s < 5; ++s) EXPECT_LT(max_normalization_error(random_kernel(6, s)), 1e-12);
}

TEST(TransitionWeights, UnchangedWhenDegreeAlreadyMatches) {
  const auto w = transition_weights(five(), 0, {1, 4}, 2);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].first, (VertexSet{1, 4}));
  EXPECT_EQ(w[0].second, 1.0);
}

TEST(CoupleVertexDegree, NoChangeWhenDegreeMatches) {
  const auto k = five();
  const Graph g(5, {{0, 1}, {0, 4}, {2, 3}});
  const auto out = couple_vertex_degree(g, k, 0, 2, 9);
  EXPECT_EQ(out.graph, g);
  EXPECT_TRUE(out.removed.empty());
  EXPECT_TRUE(out.added.empty());
}

TEST(CoupleVertexDegree, DegreeZeroIsolatesVertex) {
  const auto k = five();
  const Graph g(5, {{0, 1}, {0, 4}, {2, 3}, {1, 4}});
  const auto out = couple_vertex_degree(g, k, 0, 0, 9);
  EXPECT_EQ(out.graph, Graph(5, {{2, 3}, {1, 4}}));
  EXPECT_EQ(out.removed, (std::vector<Edge>{{0, 1}, {0, 4}}));
}

TEST(CoupleVertexDegree, InvariantsOnRandomInputs) {
  for (Seed s = 0; s < 200; ++s) {
    const std::size_t n = 3 + s % 8;
    const auto k = random_kernel(n, s);
    const Graph g = sample_graph(k, derive_seed(s, 1));
    const auto v = static_cast<Vertex>(s % n);
    const std::size_t i = (s / 3) % n;
    const auto out = couple_vertex_degree(g, k, v, i, derive_seed(s, 2));
    ASSERT_EQ(out.graph.degree(v), i);
    for (const auto& e : g.edges()) {
      if (e.first != v && e.second != v) {
        EXPECT_TRUE(out.graph.adjacent(e.first, e.second));
      }
    }
    for (const auto& e : out.graph.edges()) {
      if (e.first != v && e.second != v) {
        EXPECT_TRUE(g.adjacent(e.first, e.second));
      }
    }
    for (const auto& e : out.removed) EXPECT_TRUE(g.adjacent(e.first, e.second) && !out.graph.adjacent(e.first, e.second));
    for (const auto& e : out.added) EXPECT_TRUE(!g.adjacent(e.first, e.second) && out.graph.adjacent(e.first, e.second));
    // Moves in one direction only.
    EXPECT_TRUE(out.removed.empty() || out.added.empty());
  }
}

TEST(CoupleVertexDegree, NullConditioningRejected) {
  const auto k = build_kernel(ModelSpec::homogeneous(4, 0.0));
  EXPECT_THROW(couple_vertex_degree(Graph(4, {}), k, 0, 2, 1), ValidationError);
}

TEST(CoupleVertexDegree, EmpiricalLawMatchesWeights) {
  const auto k = five();
  const std::size_t reps = 60000;
  for (const auto& [xd, i] : std::vector<std::pair<VertexSet, std::size_t>>{{{1, 2, 4}, 1}, {{3}, 3}, {{1, 2, 3, 4}, 2}}) {
    std::vector<Edge> edges;
    for (auto u : xd) edges.emplace_back(0, u);
    const Graph g(5, edges);
    std::map<VertexSet, double> freq;
    for (std::size_t r = 0; r < reps; ++r) freq[couple_vertex_degree(g, k, 0, i, derive_seed(31, r)).graph.neighbours(0)] += 1.0;
    for (const auto& [target, f] : transition_weights(k, 0, xd, i)) {
      const double se = std::sqrt(f * (1 - f) / reps);
      EXPECT_NEAR(freq[target] / reps, f, 4.5 * se + 1e-12);
    }
  }
}

TEST(CoupledLaw, EqualsConditionalLawAtThreeVertices) {
  for (const auto& k : {three(0.2, 0.7, 0.3), build_kernel(ModelSpec::homogeneous(3, 0.5)), random_kernel(3, 4)})
    EXPECT_LT(max_coupling_law_error(k), 1e-12);
}

TEST(SizeBiasedIndex, HomogeneousIsUniform) {
  const auto probs = size_biased_index_probs(build_kernel(ModelSpec::homogeneous(7, 0.3)), 2);
  for (double p : probs) EXPECT_NEAR(p, 1.0 / 7.0, 1e-15);
}

TEST(SizeBiasedIndex, PairForcesSingleEdge) {
  const auto k = build_kernel(ModelSpec::homogeneous(2, 0.5));
  const auto probs = size_biased_index_probs(k, 1);
  EXPECT_NEAR(probs[0], 0.5, 1e-15);
  EXPECT_NEAR(probs[1], 0.5, 1e-15);
  for (Seed s = 0; s < 20; ++s) {
    const auto g = sample_graph(k, s);
    const auto [out, index] = size_biased_count_graph(g, k, 1, derive_seed(s, 3));
    EXPECT_EQ(out.graph, Graph(2, {{0, 1}}));
  }
}

TEST(SizeBiasedIndex, RejectsZeroMean) {
  EXPECT_THROW(size_biased_index_probs(build_kernel(ModelSpec::homogeneous(4, 0.0)), 2), ValidationError);
  EXPECT_THROW(size_biased_index_probs(build_kernel(ModelSpec::homogeneous(4, 0.5)), 4), ValidationError);
}

TEST(SizeBiasedIndex, DrawFollowsProbabilities) {
  const std::vector<double> probs{0.0, 0.25, 0.0, 0.75};
  Rng rng(8);
  std::vector<double> hits(4, 0.0);
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) hits[draw_index(probs, rng)] += 1.0;
  EXPECT_EQ(hits[0], 0.0);
  EXPECT_EQ(hits[2], 0.0);
  EXPECT_NEAR(hits[3] / reps, 0.75, 4.5 * std::sqrt(0.75 * 0.25 / reps));
}

// E[W_i G(W)] = lambda_i E[G(W^i)] with both sides computed exactly.
TEST(SizeBiasedIndex, CountsAreSizeBiased) {
  const auto k = random_kernel(4, 21);
  const auto counts = [n = k.n()](const Graph& g) {
    std::vector<double> w(n, 0.0);
    for (Vertex v = 0; v < n; ++v) w[g.degree(v)] += 1.0;
    return w;
  };
  const auto G = [](const std::vector<double>& w) { return std::exp(0.3 * w[0] - 0.2 * w[2]) + w[1] * w[1]; };
  for (std::size_t i = 0; i < 4; ++i) {
    double lhs = 0.0, lambda = 0.0;
    for_each_graph(k, [&](const Graph& g, std::uint64_t, double w) { lhs += w * counts(g)[i] * G(counts(g)); });
    const auto probs = size_biased_index_probs(k, i);
    for (Vertex v = 0; v < 4; ++v) lambda += degree_pmf(k, v).probs[i];
    double rhs = 0.0;
    for (Vertex v = 0; v < 4; ++v)
      for (const auto& t : enumerate_coupled_transitions(k, v, i))
        rhs += probs[v] * t.probability * G(counts(graph_from_mask(4, t.to)));
    EXPECT_NEAR(lhs, lambda * rhs, 1e-12) << "degree " << i;
  }
}
