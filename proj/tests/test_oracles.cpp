#include <gtest/gtest.h>

#include <random>

#include "lg/lg.hpp"

using namespace lg;
using triangle::GraphInstance;

namespace {

// Closed form: Σ_{(u,v) ∈ B²} |N_uv| · C(n − |N_uv|, x) over C(n,x)·n.
oracle::Ratio delta_closed_form(const GraphInstance& g, std::uint64_t b, int x) {
  const int n = g.n();
  std::uint64_t num = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (!((b >> u) & 1U) || !((b >> v) & 1U)) continue;
      const int t = std::popcount(g.common(u, v));
      num += static_cast<std::uint64_t>(t) * binomial(n - t, x);
    }
  return {num, binomial(n, x) * static_cast<std::uint64_t>(n)};
}

bool same(const oracle::Ratio& a, const oracle::Ratio& b) { return a.equals(b.num, b.den); }

}  // namespace

TEST(Ninter, Examples) {
  EXPECT_TRUE(oracle::ninter(4, 0b0011, 2).equals(1, 1));
  EXPECT_DOUBLE_EQ(oracle::oracle_ninter(4, 0b0011, 2), 1.0);
  for (int x = 0; x <= 6; ++x) EXPECT_TRUE(oracle::ninter(6, 0b111111, x).equals(static_cast<std::uint64_t>(x), 1));
  EXPECT_THROW(oracle::ninter(13, 1, 1), Error);
  EXPECT_THROW(oracle::ninter(4, 0b10000, 1), Error);
}

TEST(Ninter, EqualityForAllSubsets) {
  for (int v1 = 1; v1 <= 8; ++v1) {
    auto r = oracle::sweep_ninter(v1);
    EXPECT_TRUE(r.ok()) << r.first_failure;
    EXPECT_EQ(r.cases, (std::uint64_t{1} << v1) * static_cast<std::uint64_t>(v1 + 1));
  }
}

TEST(NinterSq, MatchesHypergeometricSecondMoment) {
  // |N|x/v + |N|(|N|−1)x(x−1)/(v(v−1))
  for (int v = 2; v <= 8; ++v)
    for (std::uint64_t nset = 0; nset < (std::uint64_t{1} << v); ++nset)
      for (int x = 0; x <= v; ++x) {
        const auto nn = static_cast<std::uint64_t>(std::popcount(nset));
        const auto xx = static_cast<std::uint64_t>(x), vv = static_cast<std::uint64_t>(v);
        const std::uint64_t num = nn * xx * (vv - 1) + nn * (nn - (nn > 0 ? 1 : 0)) * xx * (xx - (xx > 0 ? 1 : 0));
        ASSERT_TRUE(oracle::ninter_sq(v, nset, x).equals(num, vv * (vv - 1))) << v << " " << nset << " " << x;
      }
}

TEST(NinterSq, BoundUnderPrecondition) {
  for (int v1 = 1; v1 <= 8; ++v1) {
    auto r = oracle::sweep_ninter_sq(v1);
    EXPECT_TRUE(r.ok()) << r.first_failure;
    EXPECT_GT(r.cases, 0u);
  }
}

TEST(NinterSq, BoundCanFailWithoutPrecondition) {
  // |N| = 1, x = 1, |V1| = 4: Exp = 1/4 > 2/16
  EXPECT_FALSE(oracle::ninter_sq(4, 0b1, 1).at_most(2, 16));
}

TEST(EdgeExpectation, PathExample) {
  auto path = GraphInstance::from_edges(3, {{0, 1}, {1, 2}});
  auto r = oracle::edge_expectation(path, 1, 1);
  EXPECT_TRUE(r.equals(4, 9));
  EXPECT_NEAR(oracle::oracle_edge_exp(path, 1, 1), 4.0 / 9.0, 1e-15);
}

TEST(EdgeExpectation, ExhaustiveUpToSix) {
  for (int n = 1; n <= 6; ++n) {
    auto r = oracle::sweep_edge_expectation(n, 3);
    EXPECT_TRUE(r.ok()) << r.first_failure;
  }
}

TEST(DeltaOracle, Examples) {
  GraphInstance empty(5, 0);
  EXPECT_EQ(oracle::oracle_delta(empty, 0b11111, 2), 0.0);
  auto k3 = GraphInstance::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  auto r = oracle::delta_expectation(k3, 0b111, 1);
  EXPECT_EQ(r.den, 9u);
  EXPECT_EQ(r.num, 18u);
  EXPECT_TRUE(r.at_most(9, 1));
  EXPECT_THROW(oracle::delta_expectation(GraphInstance(11, 0), 1, 1), Error);
}

TEST(DeltaOracle, EnumerationMatchesClosedForm) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    auto g = corpus::sample_gnp(n, 0.5, rng);
    const std::uint64_t b = (rng() & oracle::full_mask(n)) | 1;
    const int x = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    EXPECT_TRUE(same(oracle::delta_expectation(g, b, x), delta_closed_form(g, b, x))) << trial;
  }
}

TEST(DeltaOracle, BoundExhaustiveUpToSix) {
  for (int n = 1; n <= 6; ++n) {
    auto r = oracle::sweep_delta_bound(n);
    EXPECT_TRUE(r.ok()) << r.first_failure;
    EXPECT_EQ(r.cases, (std::uint64_t{1} << triangle::edge_bits(n)) * ((std::uint64_t{1} << n) - 1) *
                           static_cast<std::uint64_t>(n));
  }
}

TEST(DeltaOracle, BoundOnSampledGraphsUpToEight) {
  std::mt19937_64 rng(11);
  for (int n = 7; n <= 8; ++n)
    for (double p : {0.3, 0.6, 0.9}) {
      auto g = corpus::sample_gnp(n, p, rng);
      for (int s = 0; s < 100; ++s) {
        const int b = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        std::vector<int> vs(static_cast<std::size_t>(n));
        std::iota(vs.begin(), vs.end(), 0);
        std::shuffle(vs.begin(), vs.end(), rng);
        std::uint64_t bm = 0;
        for (int i = 0; i < b; ++i) bm |= std::uint64_t{1} << vs[static_cast<std::size_t>(i)];
        for (int x = 1; x <= n; ++x)
          ASSERT_TRUE(oracle::delta_expectation(g, bm, x).at_most(static_cast<std::uint64_t>(b * b),
                                                                  static_cast<std::uint64_t>(x)))
              << n << " " << bm << " " << x;
      }
    }
}

TEST(DeltaOracle, CorpusInstances) {
  corpus::Options opt;
  opt.samples = 3;
  for (const auto& e : corpus::generate(opt)) {
    const int n = e.graph.n();
    const std::uint64_t all = oracle::full_mask(n);
    for (int x = 1; x <= n; ++x)
      ASSERT_TRUE(oracle::delta_expectation(e.graph, all, x).at_most(static_cast<std::uint64_t>(n * n),
                                                                     static_cast<std::uint64_t>(x)))
          << e.name;
  }
}
