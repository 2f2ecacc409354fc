#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "lg/parallel.hpp"
#include "lg/triangle.hpp"

namespace lg::oracle {

/// Exact expectation num / den (den = number of equally likely outcomes).
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// num/den ≤ p/q, exactly.
  bool at_most(std::uint64_t p, std::uint64_t q) const {
    return static_cast<unsigned __int128>(num) * q <= static_cast<unsigned __int128>(p) * den;
  }
  bool equals(std::uint64_t p, std::uint64_t q) const {
    return static_cast<unsigned __int128>(num) * q == static_cast<unsigned __int128>(p) * den;
  }
};

inline std::uint64_t full_mask(int n) { return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

/// Exp over x-subsets X ⊆ V and w ∈ V of |Δ(X,B,w)|, by enumeration.
inline Ratio delta_expectation(const triangle::GraphInstance& g, std::uint64_t b, int x) {
  const int n = g.n();
  require(n <= 10, "delta oracle capped at n = 10");
  require(x >= 1 && x <= n, "need 1 <= x <= n");
  require((b & ~full_mask(n)) == 0, "B has vertices outside V");
  std::uint64_t total = 0;
  const auto xs = subsets_of_size(n, x);
  for (auto xm : xs)
    for (int w = 0; w < n; ++w) {
      const std::uint64_t s = g.neighbors(w) & b;
      for (int u = 0; u < n; ++u) {
        if (!((s >> u) & 1U)) continue;
        for (int v = 0; v < n; ++v)
          if (((s >> v) & 1U) && triangle::in_delta(g, xm, u, v)) ++total;
      }
    }
  return {total, static_cast<std::uint64_t>(xs.size()) * static_cast<std::uint64_t>(n)};
}

inline double oracle_delta(const triangle::GraphInstance& g, std::uint64_t b, int x) {
  return delta_expectation(g, b, x).value();
}

/// Exp over x-subsets X of V1 of |N ∩ X|.
inline Ratio ninter(int v1, std::uint64_t nset, int x) {
  require(v1 >= 1 && v1 <= 12, "|V1| must be in [1, 12]");
  require(x >= 0 && x <= v1, "need 0 <= x <= |V1|");
  require((nset & ~full_mask(v1)) == 0, "N must be a subset of V1");
  std::uint64_t total = 0;
  const auto xs = subsets_of_size(v1, x);
  for (auto xm : xs) total += static_cast<std::uint64_t>(std::popcount(nset & xm));
  return {total, xs.size()};
}

/// Exp over x-subsets X of V1 of |N ∩ X|².
inline Ratio ninter_sq(int v1, std::uint64_t nset, int x) {
  require(v1 >= 1 && v1 <= 12, "|V1| must be in [1, 12]");
  require(x >= 0 && x <= v1, "need 0 <= x <= |V1|");
  require((nset & ~full_mask(v1)) == 0, "N must be a subset of V1");
  std::uint64_t total = 0;
  const auto xs = subsets_of_size(v1, x);
  for (auto xm : xs) {
    const auto c = static_cast<std::uint64_t>(std::popcount(nset & xm));
    total += c * c;
  }
  return {total, xs.size()};
}

/// Exp over independent x-subset X and y-subset Y of V of |E(X,Y)|, ordered pairs (u,v) ∈ X×Y with uv ∈ E.
inline Ratio edge_expectation(const triangle::GraphInstance& g, int x, int y) {
  const int n = g.n();
  require(n <= 12, "edge oracle capped at n = 12");
  require(x >= 1 && x <= n && y >= 1 && y <= n, "need 1 <= x, y <= n");
  const auto xs = subsets_of_size(n, x);
  const auto ys = subsets_of_size(n, y);
  std::uint64_t total = 0;
  for (auto xm : xs)
    for (auto ym : ys)
      for (int u = 0; u < n; ++u)
        if ((xm >> u) & 1U) total += static_cast<std::uint64_t>(std::popcount(g.neighbors(u) & ym));
  return {total, static_cast<std::uint64_t>(xs.size()) * ys.size()};
}

inline double oracle_ninter(int v1, std::uint64_t nset, int x) { return ninter(v1, nset, x).value(); }
inline double oracle_ninter_sq(int v1, std::uint64_t nset, int x) { return ninter_sq(v1, nset, x).value(); }
inline double oracle_edge_exp(const triangle::GraphInstance& g, int x, int y) { return edge_expectation(g, x, y).value(); }

// ---------------------------------------------------------------------------------------------
// Exhaustive sweeps.

struct SweepResult {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

namespace detail {

struct Tally {
  std::atomic<std::uint64_t> cases{0};
  std::atomic<std::uint64_t> failures{0};
  std::mutex mu;
  std::string first;

  void fail(const std::string& what) {
    if (failures.fetch_add(1) == 0) {
      std::lock_guard lock(mu);
      first = what;
    }
  }
  SweepResult result() {
    return {cases.load(), failures.load(), first};
  }
};

}  // namespace detail

/// Δ bound Exp_{X,w}|Δ(X,B,w)| ≤ b²/x for every graph on n vertices, every B ⊆ V (b = |B| ≥ 1) and
/// every x ∈ [1, n]. Pairs are bitmasks over V², so n ≤ 8.
inline SweepResult sweep_delta_bound(int n) {
  require(n >= 1 && n <= 8, "delta sweep capped at n = 8");
  const int m_bits = triangle::edge_bits(n);
  const std::uint64_t graphs = std::uint64_t{1} << m_bits;
  const std::uint64_t vsets = std::uint64_t{1} << n;
  // square[S]: mask of S² over n² ordered pairs (n ≤ 8 so n² ≤ 64)
  std::vector<std::uint64_t> square(vsets, 0);
  for (std::uint64_t s = 0; s < vsets; ++s)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (((s >> u) & 1U) && ((s >> v) & 1U)) square[s] |= std::uint64_t{1} << (u * n + v);

  detail::Tally tally;
  parallel_for(static_cast<std::size_t>(graphs), [&](std::size_t gi) {
    triangle::GraphInstance g(n, gi);
    std::vector<std::uint64_t> delta(vsets, 0);
    for (std::uint64_t xm = 0; xm < vsets; ++xm)
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          if (triangle::in_delta(g, xm, u, v)) delta[xm] |= std::uint64_t{1} << (u * n + v);
    // sums[B][x] = Σ_{|X| = x} Σ_w |Δ(X,B,w)|
    std::vector<std::uint64_t> sums(vsets * static_cast<std::size_t>(n + 1), 0);
    for (std::uint64_t b = 1; b < vsets; ++b)
      for (std::uint64_t xm = 1; xm < vsets; ++xm) {
        std::uint64_t s = 0;
        for (int w = 0; w < n; ++w) s += static_cast<std::uint64_t>(std::popcount(delta[xm] & square[g.neighbors(w) & b]));
        sums[b * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(std::popcount(xm))] += s;
      }
    for (std::uint64_t b = 1; b < vsets; ++b) {
      const auto bb = static_cast<std::uint64_t>(std::popcount(b));
      for (int x = 1; x <= n; ++x) {
        tally.cases.fetch_add(1, std::memory_order_relaxed);
        const std::uint64_t num = sums[b * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(x)];
        const std::uint64_t den = binomial(n, x) * static_cast<std::uint64_t>(n);
        if (!Ratio{num, den}.at_most(bb * bb, static_cast<std::uint64_t>(x)))
          tally.fail("graph " + std::to_string(gi) + " B " + std::to_string(b) + " x " + std::to_string(x));
      }
    }
  });
  return tally.result();
}

/// Exp|N ∩ X| = x|N|/|V1| exactly, all N ⊆ V1 and x ∈ [0, |V1|].
inline SweepResult sweep_ninter(int v1) {
  detail::Tally tally;
  for (std::uint64_t nset = 0; nset < (std::uint64_t{1} << v1); ++nset)
    for (int x = 0; x <= v1; ++x) {
      ++tally.cases;
      const auto nn = static_cast<std::uint64_t>(std::popcount(nset));
      if (!ninter(v1, nset, x).equals(static_cast<std::uint64_t>(x) * nn, static_cast<std::uint64_t>(v1)))
        tally.fail("N " + std::to_string(nset) + " x " + std::to_string(x));
    }
  return tally.result();
}

/// Exp|N ∩ X|² ≤ 2(x|N|/|V1|)² whenever x|N| ≥ |V1|.
inline SweepResult sweep_ninter_sq(int v1) {
  detail::Tally tally;
  for (std::uint64_t nset = 0; nset < (std::uint64_t{1} << v1); ++nset)
    for (int x = 0; x <= v1; ++x) {
      const auto nn = static_cast<std::uint64_t>(std::popcount(nset));
      const auto xx = static_cast<std::uint64_t>(x);
      if (xx * nn < static_cast<std::uint64_t>(v1)) continue;
      ++tally.cases;
      const auto vv = static_cast<std::uint64_t>(v1);
      if (!ninter_sq(v1, nset, x).at_most(2 * xx * nn * xx * nn, vv * vv))
        tally.fail("N " + std::to_string(nset) + " x " + std::to_string(x));
    }
  return tally.result();
}

/// Exp|E(X,Y)| = 2xym/n² exactly for every graph on n vertices and x, y ∈ [1, max_xy].
inline SweepResult sweep_edge_expectation(int n, int max_xy) {
  require(n >= 1 && n <= 7, "edge sweep capped at n = 7");
  detail::Tally tally;
  const std::uint64_t graphs = std::uint64_t{1} << triangle::edge_bits(n);
  parallel_for(static_cast<std::size_t>(graphs), [&](std::size_t gi) {
    triangle::GraphInstance g(n, gi);
    const auto m = static_cast<std::uint64_t>(g.m());
    for (int x = 1; x <= std::min(n, max_xy); ++x)
      for (int y = 1; y <= std::min(n, max_xy); ++y) {
        tally.cases.fetch_add(1, std::memory_order_relaxed);
        const auto nn = static_cast<std::uint64_t>(n);
        if (!edge_expectation(g, x, y).equals(2 * static_cast<std::uint64_t>(x * y) * m, nn * nn))
          tally.fail("graph " + std::to_string(gi) + " x " + std::to_string(x) + " y " + std::to_string(y));
      }
  });
  return tally.result();
}

}  // namespace lg::oracle
