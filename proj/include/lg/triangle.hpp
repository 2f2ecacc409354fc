#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lg/boolean_function.hpp"
#include "lg/combinators.hpp"

namespace lg::triangle {

/// Position of the pair {u,v} among the C(n,2) edge bits, lexicographic over u < v.
inline int pair_index(int n, int u, int v) {
  require(u != v && u >= 0 && v >= 0 && u < n && v < n, "invalid vertex pair");
  if (u > v) std::swap(u, v);
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

inline std::pair<int, int> pair_of(int n, int index) {
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (pair_index(n, u, v) == index) return {u, v};
  throw Error("edge position out of range");
}

inline int edge_bits(int n) { return n * (n - 1) / 2; }

/// Undirected simple graph on n ≤ 11 vertices encoded as C(n,2) edge bits.
class GraphInstance {
 public:
  GraphInstance(int n, Input z) : n_(n), z_(z) {
    require(n >= 1 && edge_bits(n) <= kMaxBits, "vertex count must be in [1, 11]");
    require(edge_bits(n) == 64 || (z >> edge_bits(n)) == 0, "edge bits beyond C(n,2)");
    nbr_.assign(static_cast<std::size_t>(n), 0);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (bit(z, pair_index(n, u, v))) {
          nbr_[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
          nbr_[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
        }
  }

  static GraphInstance from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Input z = 0;
    for (auto [u, v] : edges) z |= Input{1} << pair_index(n, u, v);
    return {n, z};
  }

  int n() const { return n_; }
  Input bits() const { return z_; }
  bool adjacent(int u, int v) const { return u != v && ((nbr_[static_cast<std::size_t>(u)] >> v) & 1U); }
  /// Neighborhood of v as a vertex mask.
  std::uint64_t neighbors(int v) const { return nbr_[static_cast<std::size_t>(v)]; }
  /// N_{u,v} = N_u ∩ N_v, with N_{u,u} = N_u.
  std::uint64_t common(int u, int v) const { return neighbors(u) & neighbors(v); }
  int m() const { return std::popcount(z_); }
  std::vector<int> degrees() const {
    std::vector<int> d;
    for (int v = 0; v < n_; ++v) d.push_back(std::popcount(neighbors(v)));
    return d;
  }
  /// √(Exp_v |N_v|²).
  double d2() const {
    double s = 0.0;
    for (int d : degrees()) s += static_cast<double>(d) * d;
    return std::sqrt(s / n_);
  }
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (adjacent(u, v)) out.emplace_back(u, v);
    return out;
  }
  /// Lexicographically first triangle u < v < w.
  std::optional<std::array<int, 3>> first_triangle() const {
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v) {
        if (!adjacent(u, v)) continue;
        std::uint64_t c = common(u, v) & ~((std::uint64_t{2} << v) - 1);
        if (c) return std::array<int, 3>{u, v, std::countr_zero(c)};
      }
    return std::nullopt;
  }

 private:
  int n_;
  Input z_;
  std::vector<std::uint64_t> nbr_;
};

inline bool has_triangle(int n, Input z) { return GraphInstance(n, z).first_triangle().has_value(); }

/// Triangle on all graphs with n vertices, with the lexicographically first triangle as certificate.
inline BooleanFunction triangle_function(int n) {
  require(n >= 3, "triangle function needs n >= 3");
  require(n <= 5, "explicit triangle domain capped at n = 5");
  auto dom = Domain::full(edge_bits(n));
  std::vector<std::uint8_t> values(dom->size());
  std::map<Input, IndexSet> certs;
  for (std::size_t i = 0; i < dom->size(); ++i) {
    GraphInstance g(n, (*dom)[i]);
    if (auto t = g.first_triangle()) {
      values[i] = 1;
      auto [a, b, c] = *t;
      certs[(*dom)[i]] = IndexSet::from_indices({pair_index(n, a, b), pair_index(n, a, c), pair_index(n, b, c)});
    }
  }
  return BooleanFunction(dom, std::move(values), std::move(certs));
}

// ---------------------------------------------------------------------------------------------
// Δ sets: ordered pairs (u,v) ∈ V², diagonal included.

using PairList = std::vector<std::pair<int, int>>;

struct DeltaSets {
  PairList delta;        // Δ(X)
  PairList delta_b;      // Δ(X,B) = B² ∩ Δ(X)
  PairList delta_bw;     // Δ(X,B,w) = (N_w)² ∩ Δ(X,B)
};

inline bool in_delta(const GraphInstance& g, std::uint64_t x, int u, int v) { return (g.common(u, v) & x) == 0; }

inline DeltaSets delta_sets(const GraphInstance& g, std::uint64_t x, std::optional<std::uint64_t> b = std::nullopt,
                            std::optional<int> w = std::nullopt) {
  DeltaSets out;
  const std::uint64_t all = g.n() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.n()) - 1;
  const std::uint64_t bset = b.value_or(all);
  const std::uint64_t nw = w ? g.neighbors(*w) : 0;
  for (int u = 0; u < g.n(); ++u)
    for (int v = 0; v < g.n(); ++v) {
      if (!in_delta(g, x, u, v)) continue;
      out.delta.emplace_back(u, v);
      if (!((bset >> u) & 1U) || !((bset >> v) & 1U)) continue;
      out.delta_b.emplace_back(u, v);
      if (w && ((nw >> u) & 1U) && ((nw >> v) & 1U)) out.delta_bw.emplace_back(u, v);
    }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Learning graph builders.

enum class Variant { Dense, Sparse, SparseNew };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::Dense:
      return "dense";
    case Variant::Sparse:
      return "sparse";
    case Variant::SparseNew:
      return "sparsenew";
  }
  return "";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "dense") return Variant::Dense;
  if (s == "sparse") return Variant::Sparse;
  if (s == "sparsenew") return Variant::SparseNew;
  throw Error("unknown triangle variant '" + s + "'");
}

struct Params {
  int x = 1;
  int a = 2;
  int b = 2;
};

inline void check_params(Variant v, int n, const Params& p) {
  require(n >= 3 && n <= 5, "triangle learning graphs are materialized for 3 <= n <= 5");
  if (v == Variant::SparseNew) {
    require(p.b >= 2 && p.b <= n, "sparsenew needs 2 <= b <= n");
    return;
  }
  require(p.x >= 1 && p.x <= n, "need 1 <= x <= n");
  require(p.b >= 2 && p.b <= p.a && p.a <= n, "need 2 <= b <= a <= n");
}

namespace detail {

struct Context {
  int n;
  DomainPtr domain;

  int pos(int u, int v) const { return pair_index(n, u, v); }
  GraphInstance graph(Input z) const { return {n, z}; }
  bool edge(Input z, int u, int v) const { return bit(z, pos(u, v)); }

  /// {w} × B without the diagonal.
  IndexSet star(int w, std::uint64_t b) const {
    IndexSet s;
    for (int u = 0; u < n; ++u)
      if (u != w && ((b >> u) & 1U)) s.insert(pos(w, u));
    return s;
  }
  /// X × A without the diagonal.
  IndexSet cross(std::uint64_t x, std::uint64_t a) const {
    IndexSet s;
    for (int t = 0; t < n; ++t)
      if ((x >> t) & 1U) s = s | star(t, a);
    return s;
  }
  BooleanFunction predicate(const std::function<bool(Input)>& p) const { return BooleanFunction::from_predicate(domain, p); }
  std::uint64_t all() const { return (std::uint64_t{1} << n) - 1; }
};

inline std::vector<int> members(std::uint64_t s) {
  std::vector<int> out;
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

inline std::vector<std::uint64_t> vertex_subsets(int n, int k) { return subsets_of_size(n, k); }

/// Weight 1 when every listed bit is 1 and, for each blocker t, not both bits of the pair are 1.
inline WeightRule indicator(const std::vector<int>& required, const std::vector<std::pair<int, int>>& blockers) {
  IndexSet support = IndexSet::from_indices(required);
  for (auto [p, q] : blockers) {
    support.insert(p);
    support.insert(q);
  }
  if (support.empty()) return WeightRule::constant(1.0);
  const auto bits = support.to_vector();
  std::map<std::uint64_t, double> entries;
  const std::uint64_t count = std::uint64_t{1} << bits.size();
  for (std::uint64_t a = 0; a < count; ++a) {
    Input z = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if ((a >> i) & 1U) z |= Input{1} << bits[i];
    bool ok = true;
    for (int r : required) ok = ok && bit(z, r);
    for (auto [p, q] : blockers) ok = ok && !(bit(z, p) && bit(z, q));
    if (ok) entries[z] = 1.0;
  }
  return WeightRule::table(support, std::move(entries), WeightRule::constant(0.0));
}

/// OR over candidate pairs {u,v}: single edges loading uv, weighted by `weight(u,v)`, each positive
/// when the edge is present and the weight is 1.
inline Component pair_search(const Context& ctx, IndexSet base, const std::vector<std::pair<int, int>>& pairs,
                             const std::function<WeightRule(int, int)>& weight, const std::string& stage) {
  std::vector<Component> kids;
  for (auto [u, v] : pairs) {
    const int j = ctx.pos(u, v);
    if (base.contains(j)) continue;
    auto w = weight(u, v);
    auto f = ctx.predicate([&](Input z) { return bit(z, j) && w(z) > 0.0; });
    if (f.positives().empty()) continue;
    kids.push_back(single_edge_component(base, j, w, std::move(f), stage));
  }
  if (kids.empty()) return trivial_component(base, ctx.predicate([](Input) { return false; }));
  return or_compose(kids, 1, stage).component;
}

inline Component zero_component(const Context& ctx, IndexSet base) {
  return trivial_component(base, ctx.predicate([](Input) { return false; }));
}

// Triangle w,u,v with u,v ∉ X, w ∉ X, and no t ∈ X adjacent to both u and v.
inline bool good_triangle(const GraphInstance& g, std::uint64_t x, int w, int u, int v) {
  if (u == v || w == u || w == v) return false;
  if (((x >> u) | (x >> v) | (x >> w)) & 1U) return false;
  return g.adjacent(u, v) && g.adjacent(w, u) && g.adjacent(w, v) && in_delta(g, x, u, v);
}

/// First pair u < v inside `pool` forming a good triangle with w.
inline std::optional<std::pair<int, int>> first_pair_with(const GraphInstance& g, std::uint64_t x, int w,
                                                          std::uint64_t pool) {
  for (int u : members(pool))
    for (int v : members(pool & ~((std::uint64_t{2} << u) - 1)))
      if (good_triangle(g, x, w, u, v)) return std::make_pair(u, v);
  return std::nullopt;
}

/// G_{X,A,w}: walk over b-subsets B of A loading {w}×B, then search the pairs of B \ X \ {w}.
inline Component build_xaw(const Context& ctx, std::uint64_t x, std::uint64_t a, int w, int b, LoadKind load,
                           IndexSet base) {
  const std::uint64_t pool = a & ~x & ~(std::uint64_t{1} << w);
  auto f = ctx.predicate([&](Input z) { return first_pair_with(ctx.graph(z), x, w, pool).has_value(); });
  if (f.positives().empty()) return zero_component(ctx, base);

  JohnsonSpec spec;
  spec.ground = members(a);
  spec.k = b;
  spec.r = 2;
  spec.image = [&ctx, w](IndexSet bs) { return ctx.star(w, bs.mask()); };
  spec.first_load = load;
  spec.later_load = load;
  spec.base = base;
  spec.domain = ctx.domain;
  spec.tag = "GXAw";
  spec.inner = [&ctx, x, w](IndexSet bs, IndexSet label) {
    std::vector<std::pair<int, int>> pairs;
    const auto inside = members(bs.mask() & ~x & ~(std::uint64_t{1} << w));
    for (std::size_t i = 0; i < inside.size(); ++i)
      for (std::size_t k = i + 1; k < inside.size(); ++k) pairs.emplace_back(inside[i], inside[k]);
    return pair_search(ctx, label, pairs, [&](int u, int v) {
      std::vector<std::pair<int, int>> blockers;
      for (int t : members(x)) blockers.emplace_back(ctx.pos(t, u), ctx.pos(t, v));
      return indicator({ctx.pos(w, u), ctx.pos(w, v)}, blockers);
    }, "pairs");
  };
  spec.certificate = [&ctx, x, w, pool](Input y) {
    auto p = first_pair_with(ctx.graph(y), x, w, pool);
    require(p.has_value(), "no certificate pair");
    return std::vector<int>{p->first, p->second};
  };
  return johnson_compose(spec).component;
}

/// G_{X,A}: OR over w ∉ X of G_{X,A,w}.
inline Component build_xa(const Context& ctx, std::uint64_t x, std::uint64_t a, int b, LoadKind load, IndexSet base) {
  std::vector<Component> kids;
  for (int w = 0; w < ctx.n; ++w)
    if (!((x >> w) & 1U)) kids.push_back(build_xaw(ctx, x, a, w, b, load, base));
  return or_compose(kids, 1, "GXA").component;
}

/// First pair u < v outside X with a good triangle through some w.
inline std::optional<std::pair<int, int>> first_good_pair(const GraphInstance& g, std::uint64_t x, std::uint64_t pool) {
  for (int u : members(pool))
    for (int v : members(pool & ~((std::uint64_t{2} << u) - 1)))
      for (int w = 0; w < g.n(); ++w)
        if (good_triangle(g, x, w, u, v)) return std::make_pair(u, v);
  return std::nullopt;
}

/// F_X: walk over a-subsets A of V loading X×A, then G_{X,A}.
inline Component build_fx(const Context& ctx, std::uint64_t x, const Params& p, LoadKind load) {
  const std::uint64_t pool = ctx.all() & ~x;
  auto f = ctx.predicate([&](Input z) { return first_good_pair(ctx.graph(z), x, pool).has_value(); });
  if (f.positives().empty()) return zero_component(ctx, IndexSet{});
  JohnsonSpec spec;
  spec.ground = members(ctx.all());
  spec.k = p.a;
  spec.r = 2;
  spec.image = [&ctx, x](IndexSet as) { return ctx.cross(x, as.mask()); };
  spec.first_load = load;
  spec.later_load = load;
  spec.domain = ctx.domain;
  spec.tag = "FX";
  spec.inner = [&ctx, x, p, load](IndexSet as, IndexSet label) { return build_xa(ctx, x, as.mask(), p.b, load, label); };
  spec.certificate = [&ctx, x, pool](Input y) {
    auto q = first_good_pair(ctx.graph(y), x, pool);
    require(q.has_value(), "no certificate pair");
    return std::vector<int>{q->first, q->second};
  };
  return johnson_compose(spec).component;
}

/// H_X, dense: OR over v ∈ X and pairs {u,w} of a dense load of the three triangle edges.
inline Component build_hx_dense(const Context& ctx, std::uint64_t x) {
  std::vector<Component> kids;
  for (int v : members(x))
    for (int u = 0; u < ctx.n; ++u)
      for (int w = u + 1; w < ctx.n; ++w) {
        if (u == v || w == v) continue;
        IndexSet s = IndexSet::from_indices({ctx.pos(v, u), ctx.pos(v, w), ctx.pos(u, w)});
        auto f = ctx.predicate([&](Input z) { return weight_on(z, s) == 3; });
        kids.push_back(load_then(LoadKind::Dense, IndexSet{}, s, trivial_component(s, f), "HX.load"));
      }
  return or_compose(kids, 1, "HX").component;
}

/// H_X, sparse: OR over v ∈ X of a sparse load of {v}×V followed by a search over pairs of N_v.
inline Component build_hx_sparse(const Context& ctx, std::uint64_t x) {
  std::vector<Component> kids;
  for (int v : members(x)) {
    const IndexSet star = ctx.star(v, ctx.all());
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < ctx.n; ++u)
      for (int w = u + 1; w < ctx.n; ++w)
        if (u != v && w != v) pairs.emplace_back(u, w);
    auto next = pair_search(ctx, star, pairs, [&](int u, int w) {
      return indicator({ctx.pos(v, u), ctx.pos(v, w)}, {});
    }, "HX.pairs");
    if (next.function.positives().empty()) continue;
    kids.push_back(load_then(LoadKind::Sparse, IndexSet{}, star, next, "HX.load"));
  }
  if (kids.empty()) return zero_component(ctx, IndexSet{});
  return or_compose(kids, 1, "HX").component;
}

inline Component build_x(const Context& ctx, std::uint64_t x, const Params& p, Variant v) {
  const LoadKind load = v == Variant::Dense ? LoadKind::Dense : LoadKind::Sparse;
  std::vector<Component> kids;
  kids.push_back(v == Variant::Dense ? build_hx_dense(ctx, x) : build_hx_sparse(ctx, x));
  kids.push_back(build_fx(ctx, x, p, load));
  return or_compose(kids, 1, "GX").component;
}

/// f_w: w lies in a triangle. Walk over b-subsets B of V loading {w}×B, then search (N_w ∩ B)².
inline Component build_w(const Context& ctx, int w, int b) {
  const std::uint64_t pool = ctx.all() & ~(std::uint64_t{1} << w);
  auto f = ctx.predicate([&](Input z) { return first_pair_with(ctx.graph(z), 0, w, pool).has_value(); });
  if (f.positives().empty()) return zero_component(ctx, IndexSet{});
  JohnsonSpec spec;
  spec.ground = members(ctx.all());
  spec.k = b;
  spec.r = 2;
  spec.image = [&ctx, w](IndexSet bs) { return ctx.star(w, bs.mask()); };
  spec.first_load = LoadKind::Sparse;
  spec.later_load = LoadKind::Dense;
  spec.domain = ctx.domain;
  spec.tag = "Gw";
  spec.inner = [&ctx, w](IndexSet bs, IndexSet label) {
    std::vector<std::pair<int, int>> pairs;
    const auto inside = members(bs.mask() & ~(std::uint64_t{1} << w));
    for (std::size_t i = 0; i < inside.size(); ++i)
      for (std::size_t k = i + 1; k < inside.size(); ++k) pairs.emplace_back(inside[i], inside[k]);
    return pair_search(ctx, label, pairs, [&](int u, int v) { return indicator({ctx.pos(w, u), ctx.pos(w, v)}, {}); },
                       "pairs");
  };
  spec.certificate = [&ctx, w, pool](Input y) {
    auto p = first_pair_with(ctx.graph(y), 0, w, pool);
    require(p.has_value(), "no certificate pair");
    return std::vector<int>{p->first, p->second};
  };
  return johnson_compose(spec).component;
}

}  // namespace detail

/// Learning graph for Triangle on n vertices. Dense and sparse: OR over x-subsets X of
/// (H_X ∨ F_X). Sparsenew: OR over w (k = 3) of the walk over b-subsets loading {w}×B.
inline Component build(Variant v, int n, const Params& p) {
  check_params(v, n, p);
  detail::Context ctx{n, Domain::full(edge_bits(n))};
  std::vector<Component> kids;
  if (v == Variant::SparseNew) {
    for (int w = 0; w < n; ++w) kids.push_back(detail::build_w(ctx, w, p.b));
    return or_compose(kids, 3, "top").component;
  }
  for (auto x : detail::vertex_subsets(n, p.x)) kids.push_back(detail::build_x(ctx, x, p, v));
  return or_compose(kids, static_cast<int>(kids.size()), "top").component;
}

inline Component build_dense(int n, const Params& p) { return build(Variant::Dense, n, p); }
inline Component build_sparse(int n, const Params& p) { return build(Variant::Sparse, n, p); }
inline Component build_sparsenew(int n, int b) { return build(Variant::SparseNew, n, Params{1, b, b}); }

/// Warning text when sparsenew's analysis precondition b ≥ n²/m does not hold (or m = 0).
inline std::optional<std::string> sparsenew_warning(int n, int m, int b) {
  if (m == 0) return "m = 0: the condition b >= n^2/m is undefined";
  if (static_cast<double>(b) < static_cast<double>(n) * n / m) return "b < n^2/m: outside the analysed range";
  return std::nullopt;
}

}  // namespace lg::triangle
