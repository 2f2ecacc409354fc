#include <gtest/gtest.h>

#include "lg/lg.hpp"

using namespace lg;

namespace {

DomainPtr one_bit() { return Domain::full(1); }

BooleanFunction identity_bit() {
  return BooleanFunction::from_predicate(one_bit(), [](Input z) { return bit(z, 0); });
}

LearningGraph single_edge(WeightRule w0, WeightRule w1, int n_bits = 1, int index = 0) {
  LearningGraph::Builder b(n_bits);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  VertexId v = b.add_vertex(IndexSet::from_indices({index}));
  EdgeId e = b.add_ordinary(r, v, index, std::move(w0), std::move(w1));
  b.add_default_flow(e, 1.0);
  return std::move(b).build();
}

}  // namespace

TEST(IndexSet, BasicOperations) {
  auto s = IndexSet::from_indices({3, 0, 5});
  EXPECT_EQ(s.size(), 3);
  EXPECT_EQ(s.to_vector(), (std::vector<int>{0, 3, 5}));
  EXPECT_TRUE(s.contains(IndexSet::from_indices({0, 5})));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ((s - IndexSet::from_indices({3})).to_vector(), (std::vector<int>{0, 5}));
  EXPECT_EQ(s.bound(), 6);
}

TEST(PartialAssignment, KeyRoundTrip) {
  auto a = PartialAssignment::of(0b1000, IndexSet::from_indices({0, 3}));
  EXPECT_EQ(a.key(), "1:0,4:1");
  auto back = PartialAssignment::parse(a.key());
  EXPECT_EQ(back.indices, a.indices);
  EXPECT_EQ(back.bits, a.bits);
  EXPECT_EQ(PartialAssignment::parse("").indices.size(), 0);
  EXPECT_THROW(PartialAssignment::parse("0:1"), Error);
}

TEST(Combinatorics, SubsetsMatchBinomial) {
  for (int n = 0; n <= 10; ++n)
    for (int k = 0; k <= n; ++k) {
      auto subs = subsets_of_size(n, k);
      ASSERT_EQ(subs.size(), binomial(n, k));
      for (auto s : subs) EXPECT_EQ(std::popcount(s), k);
      EXPECT_TRUE(std::is_sorted(subs.begin(), subs.end()));
    }
}

TEST(BooleanFunction, CertificatesAreChecked) {
  auto dom = Domain::full(2);
  auto f = BooleanFunction::from_predicate(dom, [](Input z) { return bit(z, 0) && bit(z, 1); });
  EXPECT_TRUE(f.is_one_certificate(0b11, IndexSet::from_indices({0, 1})));
  EXPECT_FALSE(f.is_one_certificate(0b11, IndexSet::from_indices({0})));
  auto g = f.with_certificates({{0b11, IndexSet::from_indices({0})}});
  EXPECT_TRUE(find_bad_certificate(g).has_value());
  EXPECT_THROW(f.value(0b100), Error);
}

TEST(Build, SmallestGraph) {
  auto g = single_edge(WeightRule::constant(1), WeightRule::constant(1));
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(Build, DanglingVertexIsRejected) {
  LearningGraph::Builder b(2);
  b.set_root(b.add_vertex(IndexSet{}));
  try {
    b.add_ordinary(0, 7, 0, WeightRule::constant(1), WeightRule::constant(1));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("dangling vertex"), std::string::npos);
  }
}

TEST(Build, NegativeWeightIsRejected) { EXPECT_THROW(WeightRule::constant(-1.0), Error); }

TEST(Build, DenseLoadIsAPath) {
  auto g = dense_load(IndexSet::from_indices({0, 1, 2}), 3);
  EXPECT_EQ(g->edge_count(), 3u);
  EXPECT_EQ(g->vertex_count(), 4u);
  for (const auto& e : g->edges()) EXPECT_TRUE(e.is_ordinary());
}

TEST(Validate, IdentityFunctionIsValid) {
  auto g = single_edge(WeightRule::constant(1), WeightRule::constant(1));
  auto report = validate(g, identity_bit());
  EXPECT_TRUE(report.ok()) << report.violations.front().message;
}

TEST(Validate, LinkingViolationIsLocated) {
  auto w1 = WeightRule::table(IndexSet::from_indices({0}), {{1, 2.0}}, WeightRule::constant(1.0));
  auto g = single_edge(WeightRule::constant(1), w1);
  auto report = validate(g, identity_bit());
  ASSERT_TRUE(report.has("linking"));
  const auto& v = report.violations.front();
  EXPECT_EQ(v.kind, "linking");
  EXPECT_EQ(*v.assignment, "");
  EXPECT_NE(v.message.find("c = 0"), std::string::npos);
}

TEST(Validate, UncertifiedSinkIsReported) {
  auto dom = Domain::full(2);
  auto f = BooleanFunction::from_predicate(dom, [](Input z) { return bit(z, 0); });
  auto g = single_edge(WeightRule::constant(1), WeightRule::constant(1), 2, 1);
  auto report = validate(g, f);
  EXPECT_TRUE(report.has("uncertified-sink"));
}

TEST(Validate, CycleAndUnreachableVertex) {
  LearningGraph::Builder b(2);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  VertexId u = b.add_vertex(IndexSet{});
  VertexId v = b.add_vertex(IndexSet{});
  b.add_empty(u, v);
  b.add_empty(v, u);
  auto g = std::move(b).build();
  auto f = BooleanFunction::from_predicate(Domain::full(2), [](Input) { return false; });
  auto report = validate(g, f);
  EXPECT_TRUE(report.has("cycle"));
  EXPECT_TRUE(report.has("unreachable"));
}

TEST(Validate, LabelIncrementAndUnitFlow) {
  LearningGraph::Builder b(2);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  VertexId v = b.add_vertex(IndexSet::from_indices({0, 1}));
  EdgeId e = b.add_ordinary(r, v, 0, WeightRule::constant(1), WeightRule::constant(1));
  b.add_default_flow(e, 0.5);
  auto g = std::move(b).build();
  auto f = BooleanFunction::from_predicate(Domain::full(2), [](Input z) { return z == 3; });
  auto report = validate(g, f);
  EXPECT_TRUE(report.has("label-increment"));
}

TEST(Validate, FlowOnZeroWeight) {
  auto w = WeightRule::table(IndexSet::from_indices({0}), {{1, 0.0}}, WeightRule::constant(1.0));
  auto g = single_edge(w, w);
  auto report = validate(g, identity_bit());
  EXPECT_TRUE(report.has("flow-on-zero-weight"));
}

TEST(Validate, BrokenConservation) {
  LearningGraph::Builder b(1);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  VertexId v = b.add_vertex(IndexSet::from_indices({0}));
  VertexId t = b.add_vertex(IndexSet::from_indices({0}));
  b.add_ordinary(r, v, 0, WeightRule::constant(1), WeightRule::constant(1));
  EdgeId e2 = b.add_empty(v, t);
  b.add_default_flow(e2, 1.0);
  auto report = validate(std::move(b).build(), identity_bit());
  EXPECT_TRUE(report.has("unit-flow"));
}

TEST(Expand, NoSuperEdgesIsIdentity) {
  auto g = single_edge(WeightRule::constant(2), WeightRule::constant(2));
  auto h = expand(g);
  EXPECT_EQ(h.vertex_count(), g.vertex_count());
  EXPECT_EQ(h.edge_count(), g.edge_count());
  EXPECT_EQ(*h.default_flow(), *g.default_flow());
}

TEST(Expand, DenseLoadSuperEdgeBecomesPath) {
  LearningGraph::Builder b(3);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  VertexId v = b.add_vertex(IndexSet::range(3));
  EdgeId e = b.add_super(r, v, dense_load(IndexSet::range(3), 3));
  b.add_default_flow(e, 1.0);
  auto g = std::move(b).build();
  auto h = expand(g);
  EXPECT_EQ(h.edge_count(), 3u);
  EXPECT_FALSE(h.has_super_edges());
  for (const auto& ed : h.edges()) EXPECT_TRUE(ed.is_ordinary());
  auto f = BooleanFunction::from_predicate(Domain::full(3), [](Input z) { return z == 7; });
  EXPECT_TRUE(validate(g, f).ok());
  EXPECT_TRUE(validate(h, f).ok());
}

TEST(Expand, SuperEdgeWithoutUniqueSinkFails) {
  LearningGraph::Builder in(2);
  VertexId r0 = in.add_vertex(IndexSet{});
  in.set_root(r0);
  VertexId a = in.add_vertex(IndexSet::from_indices({0}));
  VertexId c = in.add_vertex(IndexSet::from_indices({1}));
  EdgeId e1 = in.add_ordinary(r0, a, 0, WeightRule::constant(1), WeightRule::constant(1));
  EdgeId e2 = in.add_ordinary(r0, c, 1, WeightRule::constant(1), WeightRule::constant(1));
  in.add_flow(0, e1, 1.0);
  in.add_flow(1, e2, 1.0);
  auto inner = std::make_shared<const LearningGraph>(std::move(in).build());

  LearningGraph::Builder b(2);
  VertexId r = b.add_vertex(IndexSet{});
  b.set_root(r);
  b.add_super(r, b.add_vertex(IndexSet::from_indices({0})), inner);
  auto g = std::move(b).build();
  EXPECT_THROW(expand(g), Error);
}

TEST(StructuralLinking, LoadGadgetsPassExhaustively) {
  for (int s = 1; s <= 12; ++s) {
    ValidationOptions opt;
    opt.linking = LinkingMode::Structural;
    EXPECT_TRUE(validate_gadget(*dense_load(IndexSet::range(s), s), opt).ok()) << s;
    EXPECT_TRUE(validate_gadget(*sparse_load(IndexSet::range(s), s), opt).ok()) << s;
  }
}

TEST(Invariant, OrdinaryEdgesAddExactlyOneIndex) {
  for (int s = 1; s <= 8; ++s) {
    auto g = sparse_load(IndexSet::range(s), s);
    for (EdgeId e = 0; e < g->edge_count(); ++e)
      EXPECT_EQ(g->label(g->edge(e).to).size(), g->label(g->edge(e).from).size() + 1);
  }
}
