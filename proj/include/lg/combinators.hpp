#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lg/boolean_function.hpp"
#include "lg/complexity.hpp"
#include "lg/learning_graph.hpp"
#include "lg/superedges.hpp"

namespace lg {

/// A learning graph together with the function it is meant to compute.
struct Component {
  GraphPtr graph;
  BooleanFunction function;

  IndexSet root_label() const { return graph->label(graph->root()); }
};

inline Component make_component(LearningGraph g, BooleanFunction f) {
  return {std::make_shared<const LearningGraph>(std::move(g)), std::move(f)};
}

/// Edgeless graph at `label`; valid for f when `label` certifies every positive of f.
inline Component trivial_component(IndexSet label, BooleanFunction f) {
  LearningGraph::Builder b(f.n_bits());
  b.set_root(b.add_vertex(label));
  return make_component(std::move(b).build(), std::move(f));
}

/// One ordinary edge from `base` loading `index`, with w^0 = w^1 = w; flow 1 for every positive of f.
inline Component single_edge_component(IndexSet base, int index, const WeightRule& w, BooleanFunction f,
                                       const std::string& stage = {}) {
  LearningGraph::Builder b(f.n_bits());
  VertexId root = b.add_vertex(base);
  b.set_root(root);
  IndexSet head = base;
  head.insert(index);
  EdgeId e = b.add_ordinary(root, b.add_vertex(head), index, w, w, stage);
  for (Input y : f.positives()) {
    require(w(y) > 0.0, "single edge has zero weight on a positive input");
    b.add_flow(y, e, 1.0);
  }
  return make_component(std::move(b).build(), std::move(f));
}

/// Load `set` (minus `base`) with one super edge, then continue with `next`, rooted at the loaded label.
inline Component load_then(LoadKind kind, IndexSet base, IndexSet set, const Component& next,
                           const std::string& stage = {}) {
  const auto& f = next.function;
  LearningGraph::Builder b(f.n_bits());
  VertexId root = b.add_vertex(base);
  b.set_root(root);
  VertexId mid = b.add_vertex(base | set);
  require(next.root_label() == (base | set), "continuation must be rooted at the loaded label");
  EdgeId e = add_load(b, root, mid, kind, set - base, stage);
  auto map = b.plug(*next.graph, mid, WeightRule::constant(1.0));
  for (Input y : f.positives()) {
    b.add_flow(y, e, 1.0);
    b.plug_flow(*next.graph, map, y, 1.0);
  }
  return make_component(std::move(b).build(), f);
}

struct OrResult {
  Component component;
  std::vector<double> lambda;  // per child; 0 for children never positive
  std::vector<double> child_c1;
};

/// OR composition: children share the root, child i is rescaled by λ_i = C^1(G_i)/k, and a positive
/// input sends 1/k to each of the first k children positive on it.
inline OrResult or_compose(const std::vector<Component>& children, int k, const std::string& stage = {}) {
  require(!children.empty(), "OR composition without children");
  require(k >= 1, "OR composition needs k >= 1");
  const auto& domain = children.front().function.domain();
  const IndexSet base = children.front().root_label();
  for (const auto& c : children) {
    require(c.function.domain() == domain, "OR children live on different domains");
    require(c.root_label() == base, "OR children must share the root label");
  }

  OrResult out;
  out.lambda.resize(children.size(), 0.0);
  out.child_c1.resize(children.size(), 0.0);
  parallel_for(children.size(), [&](std::size_t i) {
    const auto& c = children[i];
    if (c.function.positives().empty()) return;
    out.child_c1[i] = max_c1(*c.graph, c.function);
    out.lambda[i] = out.child_c1[i] / k;
  });

  LearningGraph::Builder b(domain->n_bits());
  VertexId root = b.add_vertex(base);
  b.set_root(root);
  std::vector<PlugMap> maps(children.size());
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (children[i].function.positives().empty()) continue;  // dead branch: zero weight, never routed
    maps[i] = b.plug(*children[i].graph, root, WeightRule::constant(out.lambda[i]));
    if (!stage.empty())
      for (EdgeId e : maps[i].edge)
        if (b.edge(e).stage.empty()) b.set_stage(e, stage);
  }

  std::vector<const BooleanFunction*> parts;
  for (const auto& c : children) parts.push_back(&c.function);
  auto f = disjunction(domain, parts);
  for (Input y : f.positives()) {
    int used = 0;
    for (std::size_t i = 0; i < children.size() && used < k; ++i) {
      if (!children[i].function.value(y)) continue;
      b.plug_flow(*children[i].graph, maps[i], y, 1.0 / k);
      ++used;
    }
    require(used == k, "positive input " + to_bitstring(y, f.n_bits()) + " has fewer than k positive children");
  }
  if (!stage.empty()) b.add_stage_info({stage, "or", children.size(), static_cast<std::uint64_t>(k), 0.0});
  out.component = make_component(std::move(b).build(), std::move(f));
  return out;
}

/// Unit-flow contribution c^1(e, y) of an edge, or nullopt where the positive weight vanishes.
inline std::optional<double> unit_edge_c1(const LearningGraph& g, EdgeId id, Input y) {
  const Edge& e = g.edge(id);
  if (e.is_ordinary()) {
    const double w = e.w1(y);
    if (w <= 0.0) return std::nullopt;
    return 1.0 / w;
  }
  if (e.is_super()) {
    const double fct = e.factor(y);
    if (fct <= 0.0) return std::nullopt;
    return c1_all(*e.inner, y) / fct;
  }
  return std::nullopt;
}

/// Speciality rebalancing of the edges tagged `stage`: the flow of every positive input must be
/// uniform over the same number n_used of them; every edge is then rescaled by c^1(e)/n_used.
inline LearningGraph rebalance_stage(const LearningGraph& g, const std::string& stage, const BooleanFunction& f,
                                     std::uint64_t n_total = 0, StageInfo* info = nullptr) {
  const auto edges = g.edges_in_stage(stage);
  require(!edges.empty(), "stage '" + stage + "' has no edges");
  const auto positives = f.positives();
  std::optional<std::size_t> n_used;
  for (Input y : positives) {
    const SparseFlow* flow = g.flow_for(y);
    require(flow != nullptr, "no flow for positive input " + to_bitstring(y, f.n_bits()));
    std::size_t used = 0;
    std::optional<double> level;
    for (EdgeId e : edges) {
      const double p = flow_on(*flow, e);
      if (p == 0.0) continue;
      ++used;
      if (!level) level = p;
      require(std::abs(p - *level) <= 1e-12 * *level, "non-uniform flow on stage '" + stage + "'");
    }
    if (used == 0) continue;
    require(std::abs(*level * static_cast<double>(used) - 1.0) <= 1e-9,
            "flow entering stage '" + stage + "' is not 1");
    require(!n_used || *n_used == used, "stage '" + stage + "' uses a varying number of transitions");
    n_used = used;
  }
  require(n_used.has_value(), "stage '" + stage + "' carries no flow");

  std::vector<double> c1(edges.size(), 0.0);
  parallel_for(edges.size(), [&](std::size_t i) {
    for (Input y : positives)
      if (auto v = unit_edge_c1(g, edges[i], y)) c1[i] = std::max(c1[i], *v);
  });
  auto b = LearningGraph::Builder::from(g);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (g.edge(edges[i]).is_empty() || c1[i] == 0.0) continue;
    b.scale_edge(edges[i], WeightRule::constant(c1[i] / static_cast<double>(*n_used)));
  }
  StageInfo s{stage, "speciality", n_total ? n_total : edges.size(), *n_used, 0.0};
  s.speciality = static_cast<double>(s.n_total) / static_cast<double>(s.n_used);
  b.add_stage_info(s);
  if (info) *info = s;
  return std::move(b).build();
}

/// Inputs to the Johnson-walk composition. Subsets of the ground set are masks over element ids.
struct JohnsonSpec {
  std::vector<int> ground;
  int k = 0;
  int r = 0;
  std::function<IndexSet(IndexSet)> image;
  LoadKind first_load = LoadKind::Dense;
  LoadKind later_load = LoadKind::Dense;
  /// Component for f_A rooted at the given label (root label ∪ I(A)).
  std::function<Component(IndexSet, IndexSet)> inner;
  /// T_y in walk order, r ground elements.
  std::function<std::vector<int>(Input)> certificate;
  IndexSet base;
  DomainPtr domain;
  std::string tag = "johnson";
};

struct JohnsonResult {
  Component component;
  std::vector<StageInfo> stages;
  std::map<std::uint64_t, VertexId> vertex_of;  // subset mask -> vertex
};

inline std::string stage_name(const std::string& tag, int l) { return tag + ".stage" + std::to_string(l); }

inline JohnsonResult johnson_compose(const JohnsonSpec& spec) {
  const int n = static_cast<int>(spec.ground.size());
  require(spec.r >= 0 && spec.r <= spec.k && spec.k <= n, "Johnson parameters need r <= k <= n");
  require(spec.domain != nullptr && spec.image && spec.inner && spec.certificate, "incomplete Johnson spec");
  const int n_bits = spec.domain->n_bits();
  const int r = spec.r, k = spec.k;

  auto subsets = [&](int size) {
    std::vector<IndexSet> out;
    for (auto local : subsets_of_size(n, size)) {
      IndexSet s;
      for (int i = 0; i < n; ++i)
        if ((local >> i) & 1U) s.insert(spec.ground[static_cast<std::size_t>(i)]);
      out.push_back(s);
    }
    return out;
  };

  LearningGraph::Builder b(n_bits);
  JohnsonResult out;
  VertexId root = b.add_vertex(spec.base);
  b.set_root(root);
  std::map<std::uint64_t, IndexSet> images;
  auto image = [&](IndexSet s) {
    auto it = images.find(s.mask());
    if (it == images.end()) it = images.emplace(s.mask(), spec.image(s)).first;
    return it->second;
  };
  auto vertex = [&](IndexSet s) {
    auto it = out.vertex_of.find(s.mask());
    if (it != out.vertex_of.end()) return it->second;
    VertexId v = b.add_vertex(spec.base | image(s));
    out.vertex_of.emplace(s.mask(), v);
    return v;
  };

  std::map<std::uint64_t, EdgeId> first_edge;                  // A' -> stage-0 edge
  std::map<std::pair<std::uint64_t, int>, EdgeId> step_edge;  // (A', j) -> edge
  if (k - r == 0) {
    out.vertex_of.emplace(0, root);
  } else {
    for (IndexSet a : subsets(k - r)) {
      VertexId v = vertex(a);
      first_edge[a.mask()] = add_load(b, root, v, spec.first_load, b.label(v) - spec.base, stage_name(spec.tag, 0));
    }
  }
  for (int l = 1; l <= r; ++l) {
    for (IndexSet a : subsets(k - r + l - 1)) {
      VertexId from = vertex(a);
      for (int j : spec.ground) {
        if (a.contains(j)) continue;
        IndexSet next = a;
        next.insert(j);
        require(image(next).contains(image(a)), "set map is not monotone");
        VertexId to = vertex(next);
        step_edge[{a.mask(), j}] =
            add_load(b, from, to, spec.later_load, b.label(to) - b.label(from), stage_name(spec.tag, l));
      }
    }
  }

  const auto top = subsets(k);
  const double n_used = static_cast<double>(binomial(n - r, k - r));
  std::vector<Component> inner(top.size());
  std::vector<WeightRule> lambda(top.size());
  parallel_for(top.size(), [&](std::size_t i) {
    const IndexSet label = spec.base | image(top[i]);
    inner[i] = spec.inner(top[i], label);
    require(inner[i].root_label() == label, "inner graph is not rooted at the label of its subset");
    std::map<std::uint64_t, double> table;
    for (Input y : inner[i].function.positives()) {
      auto& slot = table[y & label.mask()];
      slot = std::max(slot, c1_all(*inner[i].graph, y) / n_used);
    }
    lambda[i] = WeightRule::table(label, std::move(table), WeightRule::constant(0.0));
  });
  std::vector<PlugMap> maps(top.size());
  std::map<std::uint64_t, std::size_t> top_index;
  const std::string last = stage_name(spec.tag, r + 1);
  for (std::size_t i = 0; i < top.size(); ++i) {
    top_index[top[i].mask()] = i;
    maps[i] = b.plug(*inner[i].graph, out.vertex_of.at(top[i].mask()), lambda[i]);
    for (EdgeId e : maps[i].edge)
      if (b.edge(e).stage.empty()) b.set_stage(e, last);
  }

  std::vector<const BooleanFunction*> parts;
  for (const auto& c : inner) parts.push_back(&c.function);
  auto f = disjunction(spec.domain, parts);

  for (Input y : f.positives()) {
    const auto t = spec.certificate(y);
    require(static_cast<int>(t.size()) == r, "certificate oracle returned a set of size != r");
    IndexSet ts;
    for (int j : t) {
      require(std::find(spec.ground.begin(), spec.ground.end(), j) != spec.ground.end(),
              "certificate element outside the ground set");
      ts.insert(j);
    }
    require(ts.size() == r, "certificate oracle returned repeated elements");
    const double p = 1.0 / n_used;
    for (IndexSet a : subsets(k - r)) {
      if (!a.disjoint(ts)) continue;
      if (k - r > 0) b.add_flow(y, first_edge.at(a.mask()), p);
      IndexSet cur = a;
      for (int j : t) {
        b.add_flow(y, step_edge.at({cur.mask(), j}), p);
        cur.insert(j);
      }
      const std::size_t i = top_index.at(cur.mask());
      require(inner[i].function.value(y), "inner function is negative on an input its subset should certify");
      b.plug_flow(*inner[i].graph, maps[i], y, p);
    }
  }

  StageInfo inner_info{last, "johnson-inner", top.size(), static_cast<std::uint64_t>(n_used), 0.0};
  inner_info.speciality = static_cast<double>(top.size()) / n_used;
  b.add_stage_info(inner_info);

  LearningGraph g = std::move(b).build();
  for (int l = (k - r == 0 ? 1 : 0); l <= r; ++l) {
    StageInfo info;
    const std::uint64_t total = l == 0 ? binomial(n, k - r) : binomial(n, k - r + l - 1) * static_cast<std::uint64_t>(n - (k - r + l - 1));
    g = rebalance_stage(g, stage_name(spec.tag, l), f, total, &info);
    out.stages.push_back(info);
  }
  out.stages.push_back(inner_info);
  out.component = make_component(std::move(g), std::move(f));
  return out;
}

}  // namespace lg
