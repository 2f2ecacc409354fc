#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lg/lg.hpp"

using namespace lg;

namespace {

// f_i(z) = z_i with a single unit edge loading i.
std::vector<Component> bit_gadgets(const DomainPtr& dom, int count) {
  std::vector<Component> out;
  for (int i = 0; i < count; ++i) {
    auto f = BooleanFunction::from_predicate(dom, [i](Input z) { return bit(z, i); });
    out.push_back(single_edge_component(IndexSet{}, i, WeightRule::constant(1.0), f));
  }
  return out;
}

// Threshold "at least r ones among n bits" through the Johnson composition with I = identity.
JohnsonResult threshold_walk(int n, int k, int r, LoadKind load) {
  auto dom = Domain::full(n);
  JohnsonSpec spec;
  for (int i = 0; i < n; ++i) spec.ground.push_back(i);
  spec.k = k;
  spec.r = r;
  spec.image = [](IndexSet a) { return a; };
  spec.first_load = load;
  spec.later_load = load;
  spec.domain = dom;
  spec.inner = [dom, r](IndexSet a, IndexSet label) {
    auto fa = BooleanFunction::from_predicate(dom, [a, r](Input z) { return weight_on(z, a) >= r; });
    return trivial_component(label, fa);
  };
  spec.certificate = [r](Input y) {
    std::vector<int> t;
    for (int i = 0; static_cast<int>(t.size()) < r; ++i)
      if (bit(y, i)) t.push_back(i);
    return t;
  };
  return johnson_compose(spec);
}

}  // namespace

TEST(Or, ThreeUnitChildren) {
  auto dom = Domain::full(3);
  auto res = or_compose(bit_gadgets(dom, 3), 1);
  const auto& c = res.component;
  EXPECT_TRUE(validate(*c.graph, c.function).ok());
  auto report = complexity(*c.graph, c.function).total;
  EXPECT_DOUBLE_EQ(report.c0_max, 3.0);
  EXPECT_LE(report.c1_max, 1.0 + 1e-12);
  EXPECT_NEAR(report.c, std::sqrt(3.0), 1e-12);
}

TEST(Or, FourSingleBitGadgets) {
  auto dom = Domain::full(4);
  auto res = or_compose(bit_gadgets(dom, 4), 1);
  const auto& c = res.component;
  EXPECT_DOUBLE_EQ(c0(*c.graph, 0), 4.0);
  EXPECT_NEAR(total_complexity(*c.graph, c.function), 2.0, 1e-12);
}

TEST(Or, AllChildrenPositiveCancelsRatio) {
  auto dom = std::make_shared<const Domain>(4, std::vector<Input>{0, 15});
  std::vector<Component> kids;
  for (int i = 0; i < 4; ++i) {
    auto f = BooleanFunction::from_predicate(dom, [i](Input z) { return bit(z, i); });
    kids.push_back(single_edge_component(IndexSet{}, i, WeightRule::constant(1.0 + i), f));
  }
  auto res = or_compose(kids, 4);
  double expect = 0.0;
  for (int i = 0; i < 4; ++i) expect += (1.0 + i) * (1.0 / (1.0 + i)) / 4.0;
  EXPECT_NEAR(c0(*res.component.graph, 0), expect, 1e-12);
}

TEST(Or, RandomChildrenKeepEqualityAndUnitBound) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  auto dom = Domain::full(5);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Component> kids;
    const int count = 2 + trial % 4;
    for (int i = 0; i < count; ++i) {
      IndexSet s = IndexSet::from_indices({i % 5, (i + 1 + trial % 4) % 5});
      auto f = BooleanFunction::from_predicate(dom, [s](Input z) { return weight_on(z, s) == s.size(); });
      kids.push_back(load_then(trial % 2 ? LoadKind::Sparse : LoadKind::Dense, IndexSet{}, s,
                               trivial_component(s, f)));
      auto g = scale_weights(*kids.back().graph, scale(rng));
      kids.back().graph = std::make_shared<const LearningGraph>(std::move(g));
    }
    auto res = or_compose(kids, 1);
    const auto& c = res.component;
    ASSERT_TRUE(validate(*c.graph, c.function).ok());
    for (Input x : c.function.negatives()) {
      double sum = 0.0;
      for (int i = 0; i < count; ++i) sum += res.lambda[i] * c0(*kids[i].graph, x);
      EXPECT_NEAR(c0(*c.graph, x), sum, 1e-12 * std::max(1.0, sum));
    }
    for (Input y : c.function.positives()) EXPECT_LE(c1(*c.graph, y), 1.0 + 1e-12);
  }
}

TEST(Or, DeadChildIsDropped) {
  auto dom = Domain::full(2);
  auto kids = bit_gadgets(dom, 2);
  auto never = BooleanFunction::from_predicate(dom, [](Input) { return false; });
  kids.push_back(single_edge_component(IndexSet{}, 0, WeightRule::constant(5.0), never));
  auto res = or_compose(kids, 1);
  EXPECT_EQ(res.lambda[2], 0.0);
  EXPECT_DOUBLE_EQ(c0(*res.component.graph, 0), 2.0);
}

TEST(Or, TooFewPositiveChildren) {
  auto dom = Domain::full(2);
  EXPECT_THROW(or_compose(bit_gadgets(dom, 2), 2), Error);
}

TEST(Rebalance, ParallelUnitEdges) {
  auto dom = Domain::full(4);
  auto f = BooleanFunction::from_predicate(dom, [](Input z) { return z != 0; });
  LearningGraph::Builder b(4);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  std::vector<EdgeId> edges;
  for (int i = 0; i < 4; ++i)
    edges.push_back(b.add_ordinary(r, b.add_vertex(IndexSet::from_indices({i})), i, WeightRule::constant(1),
                                   WeightRule::constant(1), "s"));
  for (Input y : f.positives()) b.add_flow(y, edges[static_cast<std::size_t>(std::countr_zero(y))], 1.0);
  StageInfo info;
  auto g = rebalance_stage(std::move(b).build(), "s", f, 0, &info);
  EXPECT_EQ(info.n_used, 1u);
  EXPECT_DOUBLE_EQ(info.speciality, 4.0);
  EXPECT_DOUBLE_EQ(c0(g, 0), 4.0);
  EXPECT_LE(max_c1(g, f), 1.0 + 1e-12);
}

TEST(Rebalance, SingleLoadStage) {
  auto dom = Domain::full(3);
  auto f = BooleanFunction::from_predicate(dom, [](Input z) { return z == 7; });
  LearningGraph::Builder b(3);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  EdgeId e = add_load(b, r, b.add_vertex(IndexSet::range(3)), LoadKind::Dense, IndexSet::range(3), "s");
  b.add_default_flow(e, 1.0);
  auto g = rebalance_stage(std::move(b).build(), "s", f);
  EXPECT_DOUBLE_EQ(c0(g, 0), 9.0);
}

TEST(Rebalance, DenseLoadsScaleByUsedCount) {
  auto dom = Domain::full(4);
  auto f = BooleanFunction::from_predicate(dom, [](Input z) { return z == 15; });
  LearningGraph::Builder b(4);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  EdgeId a = add_load(b, r, b.add_vertex(IndexSet::range(2)), LoadKind::Dense, IndexSet::range(2), "s");
  EdgeId c = add_load(b, r, b.add_vertex(IndexSet::range(4) - IndexSet::range(2)), LoadKind::Dense,
                      IndexSet::range(4) - IndexSet::range(2), "s");
  b.add_default_flow(a, 0.5);
  b.add_default_flow(c, 0.5);
  auto g = rebalance_stage(std::move(b).build(), "s", f);
  EXPECT_DOUBLE_EQ(c0(g, 0), 4.0);  // 2 · (4 · 1/2)
}

TEST(Rebalance, NonUniformFlowIsRejected) {
  auto dom = Domain::full(2);
  auto f = BooleanFunction::from_predicate(dom, [](Input z) { return z == 3; });
  LearningGraph::Builder b(2);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  EdgeId a = b.add_ordinary(r, b.add_vertex(IndexSet::from_indices({0})), 0, WeightRule::constant(1),
                            WeightRule::constant(1), "s");
  EdgeId c = b.add_ordinary(r, b.add_vertex(IndexSet::from_indices({1})), 1, WeightRule::constant(1),
                            WeightRule::constant(1), "s");
  b.add_flow(3, a, 0.25);
  b.add_flow(3, c, 0.75);
  EXPECT_THROW(rebalance_stage(std::move(b).build(), "s", f), Error);
}

TEST(Johnson, PairWalkOnFourElements) {
  auto res = threshold_walk(4, 2, 2, LoadKind::Dense);
  const auto& g = *res.component.graph;
  EXPECT_EQ(g.vertex_count(), 11u);
  std::size_t ordinary = 0;
  for (const auto& e : g.edges()) ordinary += e.is_ordinary();
  EXPECT_EQ(ordinary, 16u);
  EXPECT_EQ(g.edge_count(), 16u);
}

TEST(Johnson, AtLeastTwoOnesValidates) {
  auto res = threshold_walk(4, 2, 2, LoadKind::Dense);
  const auto& c = res.component;
  auto report = validate(*c.graph, c.function);
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(c.function.value(15));
  const auto flow = c.graph->flow_for(15);
  ASSERT_NE(flow, nullptr);
  auto sinks = flow_sinks(*c.graph, *flow);
  ASSERT_EQ(sinks.size(), 1u);
  EXPECT_EQ(c.graph->label(sinks[0]).size(), 2);
}

TEST(Johnson, StageBoundsAndTotal) {
  for (auto load : {LoadKind::Dense, LoadKind::Sparse})
    for (int n = 4; n <= 6; ++n)
      for (int r = 1; r <= 2; ++r)
        for (int k = r; k <= n; ++k) {
          auto res = threshold_walk(n, k, r, load);
          const auto& c = res.component;
          ASSERT_TRUE(validate(*c.graph, c.function).ok()) << n << k << r;
          auto report = complexity(*c.graph, c.function);
          for (const auto& s : report.stages) EXPECT_LE(s.c1_max, 1.0 + 1e-12) << s.name;
          EXPECT_LE(report.total.c1_max, r + 2 + 1e-12);
          auto normalized = scale_weights(*c.graph, r + 2);
          EXPECT_LE(max_c1(normalized, c.function), 1.0 + 1e-12);
          EXPECT_NEAR(total_complexity(normalized, c.function), report.total.c, 1e-9 * report.total.c);
        }
}

TEST(Johnson, NegativeCostWithinConstantOfStageExpectations) {
  double worst = 0.0;
  for (int n = 4; n <= 8; ++n)
    for (int r = 1; r <= 2; ++r)
      for (int k = r + 1; k <= n - r; ++k) {
        auto res = threshold_walk(n, k, r, LoadKind::Dense);
        const auto& c = res.component;
        // dense loads: Exp C0(Load_{I(A')}) = (k-r)^2, single-element steps cost 1, inner graphs are free
        const double s2 = static_cast<double>((k - r) * (k - r));
        const double u2 = 1.0;
        const double bound = s2 + std::pow(static_cast<double>(n) / k, r) * (k * u2);
        worst = std::max(worst, max_c0(*c.graph, c.function) / bound);
      }
  EXPECT_LE(worst, 16.0);
}

TEST(Johnson, RejectsBadCertificateSize) {
  auto dom = Domain::full(3);
  JohnsonSpec spec;
  spec.ground = {0, 1, 2};
  spec.k = 2;
  spec.r = 1;
  spec.image = [](IndexSet a) { return a; };
  spec.domain = dom;
  spec.inner = [dom](IndexSet a, IndexSet label) {
    return trivial_component(label, BooleanFunction::from_predicate(dom, [a](Input z) { return weight_on(z, a) >= 1; }));
  };
  spec.certificate = [](Input) { return std::vector<int>{0, 1}; };
  EXPECT_THROW(johnson_compose(spec), Error);
}
