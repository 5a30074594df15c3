#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "gadforge/encoder.hpp"
#include "gadforge/error.hpp"
#include "gadforge/gradcheck.hpp"
#include "gadforge/heads.hpp"
#include "gadforge/loss.hpp"
#include "gadforge/objective.hpp"
#include "gadforge/optimizer.hpp"

namespace gadforge {
namespace {

ModelShape small_shape(std::size_t d, std::size_t hidden = 4) {
  ModelShape s;
  s.input_dim = d;
  s.hidden = hidden;
  s.head_hidden = hidden;
  return s;
}

Matrix<double> identity(std::size_t n) {
  Matrix<double> m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

TEST(Encoder, ZeroWeightsGiveZeroEmbeddings) {
  const Graph g = testing::random_graph(20, 3, 0.2, 1);
  const auto w = Weights<double>::zeros(small_shape(3));
  const Matrix<double> h = encode(g, w.encoder);
  EXPECT_EQ(h.rows(), 20u);
  EXPECT_EQ(h.cols(), 4u);
  for (const double x : h.values()) EXPECT_EQ(x, 0.0);
}

TEST(Encoder, IsolatedNodeWithIdentitySelfTransformIsRelu) {
  const Graph g = Graph::from_edges(1, 3, {1.5, -2.0, 0.25}, {});
  auto w = Weights<double>::zeros(small_shape(3, 3));
  for (auto& layer : w.encoder.layers) {
    layer.w_self = identity(3);
    layer.w_nbr = identity(3);
    layer.a_self.fill(0.7);
    layer.a_nbr.fill(-0.3);
  }
  const Matrix<double> h = encode(g, w.encoder);
  EXPECT_EQ(h(0, 0), 1.5);
  EXPECT_EQ(h(0, 1), 0.0);
  EXPECT_EQ(h(0, 2), 0.25);
}

TEST(Encoder, SingleNeighborGetsFullAttention) {
  const Graph g = Graph::from_edges(3, 2, {1, 2, 3, 4, 5, 6}, std::vector<Edge>{{0, 1}, {1, 2}});
  const auto params = init_model<double>(small_shape(2), 3);
  LayerCache<double> cache;
  attention_forward(g, features_as<double>(g), params.weights.encoder.layers[0], cache);
  const auto offsets = g.offsets();
  EXPECT_EQ(cache.alpha[offsets[0]], 1.0);
  EXPECT_EQ(cache.alpha[offsets[2]], 1.0);
}

TEST(Encoder, AttentionIsANormalizedDistribution) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = testing::random_graph(40, 5, 0.15, seed);
    const auto params = init_model<double>(small_shape(5, 8), seed);
    EncoderCache<double> cache;
    encode(g, params.weights.encoder, &cache);
    for (const auto& layer : cache.layers) {
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (g.degree(v) == 0) continue;
        double sum = 0.0;
        for (std::size_t e = g.offsets()[v]; e < g.offsets()[v + 1]; ++e) {
          EXPECT_GE(layer.alpha[e], 0.0);
          sum += layer.alpha[e];
        }
        EXPECT_NEAR(sum, 1.0, 1e-6);
      }
    }
  }
}

TEST(Encoder, PermutationEquivariant) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t n = 18;
    const Graph g = testing::random_graph(n, 4, 0.25, seed);
    std::vector<NodeId> perm = testing::iota_nodes(n);
    Rng rng(seed, "fixture");
    rng.shuffle(perm);
    std::vector<double> x(n * 4);
    for (NodeId v = 0; v < n; ++v)
      for (std::size_t i = 0; i < 4; ++i) x[perm[v] * 4 + i] = g.feature(v, i);
    std::vector<Edge> edges;
    for (const Edge& e : g.edge_list()) edges.push_back({perm[e.u], perm[e.v]});
    const Graph p = Graph::from_edges(n, 4, std::move(x), edges);

    const auto params = init_model<double>(small_shape(4, 6), seed);
    const Matrix<double> a = encode(g, params.weights.encoder);
    const Matrix<double> b = encode(p, params.weights.encoder);
    for (NodeId v = 0; v < n; ++v)
      for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(a(v, j), b(perm[v], j), 1e-12);
  }
}

TEST(Encoder, ShapeMismatchIsContractError) {
  const Graph g = testing::random_graph(10, 3, 0.2, 4);
  const auto w = Weights<double>::zeros(small_shape(5));
  try {
    encode(g, w.encoder);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Contract);
  }
}

TEST(Heads, ZeroWeightsGiveOneHalf) {
  Matrix<double> h(7, 4, 0.3);
  const auto w = Weights<double>::zeros(small_shape(2));
  for (const double p : head_forward(h, w.heads.real)) EXPECT_EQ(p, 0.5);
}

TEST(Heads, SigmoidOfLogThree) {
  EXPECT_NEAR(sigmoid(std::log(3.0)), 0.75, 1e-15);
  Matrix<double> h(1, 4);
  auto w = Weights<double>::zeros(small_shape(2));
  w.heads.real.b2(0, 0) = std::log(3.0);
  EXPECT_NEAR(head_forward(h, w.heads.real)[0], 0.75, 1e-15);
}

TEST(Heads, OutputsStayInsideUnitInterval) {
  const Graph g = testing::random_graph(50, 6, 0.1, 5);
  auto params = init_model<float>(small_shape(6, 16), 5);
  for (auto t : params.weights.tensors())
    for (auto& x : t.tensor->values()) x *= 40.0f;
  const Matrix<float> h = encode(g, params.weights.encoder);
  for (const float p : head_forward(h, params.weights.heads.real)) {
    const float q = clamp_probability(p);
    EXPECT_GT(q, 0.0f);
    EXPECT_LT(q, 1.0f);
  }
}

TEST(Bce, HandValues) {
  const std::vector<int> one{1};
  EXPECT_NEAR(bce<double>(std::vector<double>{0.5}, one), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce<double>(std::vector<double>{1.0 - 1e-7}, one), 1e-7, 1e-12);
  EXPECT_NEAR(bce<double>(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}), 0.105361, 1e-6);
  EXPECT_TRUE(std::isfinite(bce<double>(std::vector<double>{0.0, 1.0}, std::vector<int>{1, 0})));
  EXPECT_THROW(bce<double>(std::vector<double>{}, std::vector<int>{}), Error);
}

TEST(Bce, FromLogitsMatchesProbabilityForm) {
  const std::vector<double> z{-2.0, 0.3, 1.7};
  const std::vector<int> y{0, 1, 1};
  std::vector<double> d(3);
  std::vector<double> p;
  for (const double x : z) p.push_back(sigmoid(x));
  EXPECT_NEAR(bce_from_logits<double>(z, y, 1.0, d), bce<double>(p, y), 1e-15);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(d[i], (p[i] - y[i]) / 3.0, 1e-15);
}

ModelParams<double> scalar_model(double theta) {
  ModelParams<double> p;
  p.shape = small_shape(1, 1);
  p.weights = Weights<double>::zeros(p.shape);
  p.weights.fill(theta);
  p.reset_adam();
  return p;
}

TEST(Adam, FirstStepMatchesHandRecurrence) {
  auto p = scalar_model(0.0);
  GradSet<double> g = p.weights;
  g.fill(0.5);
  AdamOptions opts;
  opts.lr = 0.001;
  opts.weight_decay = 0.0;
  adam_step(p, g, opts);
  // m = 0.05, v = 0.00025; bias-corrected 0.5 and 0.25.
  const double expected = -0.001 * 0.5 / (std::sqrt(0.25) + 1e-8);
  EXPECT_NEAR(expected, -0.000999999968, 5e-11);
  for (const auto& t : std::as_const(p.weights).tensors())
    for (const double x : t.tensor->values()) EXPECT_DOUBLE_EQ(x, expected);
  EXPECT_EQ(p.adam.step, 1u);
}

TEST(Adam, ZeroGradientWithoutDecayIsNoOp) {
  auto p = scalar_model(0.7);
  const auto before = p.weights;
  GradSet<double> g = p.weights;
  g.fill(0.0);
  AdamOptions opts;
  opts.weight_decay = 0.0;
  adam_step(p, g, opts);
  EXPECT_EQ(p.weights, before);
}

TEST(Adam, DecayShrinksDecayedTensorsOnly) {
  auto p = scalar_model(0.7);
  GradSet<double> g = p.weights;
  g.fill(0.0);
  adam_step(p, g, AdamOptions{});
  for (const auto& t : std::as_const(p.weights).tensors()) {
    for (const double x : t.tensor->values()) {
      if (t.decayed) EXPECT_LT(x, 0.7) << t.name;
      else EXPECT_EQ(x, 0.7) << t.name;
    }
  }
}

TEST(Adam, BitwiseDeterministicAndValidated) {
  auto a = init_model<float>(small_shape(3, 8), 9);
  auto b = a;
  GradSet<float> g = a.weights;
  g.fill(0.125f);
  adam_step(a, g, AdamOptions{});
  adam_step(b, g, AdamOptions{});
  EXPECT_EQ(a, b);
  AdamOptions bad;
  bad.lr = 0.0;
  try {
    adam_step(a, g, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(Init, GlorotBoundsAndZeroBiases) {
  const auto p = init_model<double>(small_shape(16, 64), 1);
  for (const auto& t : p.weights.tensors()) {
    const double bound = std::sqrt(6.0 / static_cast<double>(t.tensor->rows() + t.tensor->cols()));
    for (const double x : t.tensor->values()) {
      if (!t.decayed) EXPECT_EQ(x, 0.0);
      else EXPECT_LE(std::abs(x), bound);
    }
  }
  EXPECT_EQ(p.weights.heads.synthetic.size(), 5u);
}

TEST(GradCheck, DefaultSetupPasses) {
  const GradCheckReport r = grad_check_random(GradCheckSetup{});
  EXPECT_FALSE(r.groups.empty());
  EXPECT_LE(r.worst(), 1e-4);
  for (const auto& g : r.groups) EXPECT_GT(g.coordinates, 0u) << g.name;
}

TEST(GradCheck, CorruptedAttentionGradientIsFlagged) {
  const GradCheckReport r = grad_check_random(GradCheckSetup{}, GradCheckOptions{}, [](GradSet<double>& g) {
    for (auto& x : g.encoder.layers[0].a_self.values()) x = 2.0 * x + 0.1;
  });
  const GradCheckGroup* group = r.find("encoder.0.a_self");
  ASSERT_NE(group, nullptr);
  EXPECT_GT(group->max_relative_error, 1e-2);
  EXPECT_LE(r.find("head.real")->max_relative_error, 1e-4);
}

TEST(GradCheck, EmptyParameterListGivesEmptyReport) {
  const GradCheckReport r = finite_difference_check({}, [] { return 0.0; }, {}, GradCheckOptions{});
  EXPECT_TRUE(r.groups.empty());
  EXPECT_EQ(r.worst(), 0.0);
  EXPECT_EQ(r.find("encoder"), nullptr);
}

TEST(Backward, UnusedHeadsHaveExactlyZeroGradient) {
  const Graph g = testing::random_graph(30, 4, 0.2, 11);
  const auto params = init_model<double>(small_shape(4, 6), 11);
  RealBatch real{{0, 1, 2, 3}, {1, 1, 0, 0}};
  ObjectiveSpec spec;
  spec.real = &real;
  GradSet<double> grad = Weights<double>::zeros(params.shape);
  evaluate_objective<double>(g, nullptr, params.weights, spec, &grad);
  for (const auto& head : grad.heads.synthetic)
    for (const auto* m : {&head.w1, &head.b1, &head.w2, &head.b2})
      for (const double x : m->values()) EXPECT_EQ(x, 0.0);
  double real_norm = 0.0;
  for (const double x : grad.heads.real.w2.values()) real_norm += std::abs(x);
  EXPECT_GT(real_norm, 0.0);
}

}  // namespace
}  // namespace gadforge
