#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lg/bits.hpp"
#include "lg/weight_rule.hpp"

namespace lg {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

class LearningGraph;

enum class EdgeKind { Ordinary, Empty, Super };

/// An edge of a learning graph. Ordinary edges load one index and carry the dual weight rules;
/// empty transitions connect equal labels and never contribute to complexity; super edges embed a
/// whole learning graph (root label ∅, unique flow sink) whose weights are all multiplied by `factor`.
struct Edge {
  VertexId from = 0;
  VertexId to = 0;
  EdgeKind kind = EdgeKind::Empty;
  int index = -1;
  WeightRule w0;
  WeightRule w1;
  std::shared_ptr<const LearningGraph> inner;
  WeightRule factor = WeightRule::constant(1.0);
  std::string stage;

  bool is_super() const { return kind == EdgeKind::Super; }
  bool is_ordinary() const { return kind == EdgeKind::Ordinary; }
  bool is_empty() const { return kind == EdgeKind::Empty; }
};

struct FlowEntry {
  EdgeId edge = 0;
  double value = 0.0;
  bool operator==(const FlowEntry&) const = default;
};

/// Nonzero flow values, sorted by edge id.
using SparseFlow = std::vector<FlowEntry>;

inline double flow_on(const SparseFlow& flow, EdgeId e) {
  auto it = std::lower_bound(flow.begin(), flow.end(), e,
                             [](const FlowEntry& f, EdgeId id) { return f.edge < id; });
  return (it != flow.end() && it->edge == e) ? it->value : 0.0;
}

/// Provenance of a stage produced by a combinator.
struct StageInfo {
  std::string name;
  std::string origin;
  std::uint64_t n_total = 0;
  std::uint64_t n_used = 0;
  double speciality = 0.0;
  bool operator==(const StageInfo&) const = default;
};

/// Immutable extended learning graph. Construct through LearningGraph::Builder.
class LearningGraph {
 public:
  class Builder;

  int n_bits() const { return n_bits_; }
  std::size_t vertex_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<IndexSet>& labels() const { return labels_; }
  IndexSet label(VertexId v) const { return labels_.at(v); }
  VertexId root() const { return root_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::map<Input, SparseFlow>& flows() const { return flows_; }
  const std::optional<SparseFlow>& default_flow() const { return default_flow_; }
  const std::vector<StageInfo>& stages() const { return stages_; }

  /// Flow for y: the explicit one, else the input-independent default, else null.
  const SparseFlow* flow_for(Input y) const {
    auto it = flows_.find(y);
    if (it != flows_.end()) return &it->second;
    return default_flow_ ? &*default_flow_ : nullptr;
  }

  /// Indices loaded by edge e: S(to) \ S(from).
  IndexSet loaded(EdgeId e) const {
    const auto& ed = edges_.at(e);
    return labels_.at(ed.to) - labels_.at(ed.from);
  }

  bool has_super_edges() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_super(); });
  }

  std::vector<std::vector<EdgeId>> out_edges() const {
    std::vector<std::vector<EdgeId>> out(labels_.size());
    for (EdgeId e = 0; e < edges_.size(); ++e) out[edges_[e].from].push_back(e);
    return out;
  }

  std::vector<EdgeId> edges_in_stage(const std::string& name) const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edges_.size(); ++e)
      if (edges_[e].stage == name) out.push_back(e);
    return out;
  }

 private:
  int n_bits_ = 0;
  std::vector<IndexSet> labels_;
  VertexId root_ = 0;
  std::vector<Edge> edges_;
  std::map<Input, SparseFlow> flows_;
  std::optional<SparseFlow> default_flow_;
  std::vector<StageInfo> stages_;
};

using GraphPtr = std::shared_ptr<const LearningGraph>;

/// Vertex and edge renumbering produced when one graph is copied into another.
struct PlugMap {
  std::vector<VertexId> vertex;
  std::vector<EdgeId> edge;
};

class LearningGraph::Builder {
 public:
  explicit Builder(int n_bits) { g_.n_bits_ = n_bits; }

  static Builder from(const LearningGraph& g) {
    Builder b(g.n_bits_);
    b.g_ = g;
    for (const auto& [y, flow] : g.flows_)
      for (const auto& f : flow) b.flows_[y][f.edge] += f.value;
    if (g.default_flow_) {
      b.default_set_ = true;
      for (const auto& f : *g.default_flow_) b.default_[f.edge] += f.value;
    }
    b.g_.flows_.clear();
    b.g_.default_flow_.reset();
    return b;
  }

  int n_bits() const { return g_.n_bits_; }
  std::size_t vertex_count() const { return g_.labels_.size(); }
  std::size_t edge_count() const { return g_.edges_.size(); }
  IndexSet label(VertexId v) const { return g_.labels_.at(v); }
  const Edge& edge(EdgeId e) const { return g_.edges_.at(e); }

  VertexId add_vertex(IndexSet label) {
    require(label.bound() <= g_.n_bits_, "vertex label exceeds the bit count");
    g_.labels_.push_back(label);
    return static_cast<VertexId>(g_.labels_.size() - 1);
  }

  void set_root(VertexId v) {
    check_vertex(v);
    g_.root_ = v;
  }

  EdgeId add_ordinary(VertexId from, VertexId to, int index, WeightRule w0, WeightRule w1, std::string stage = {}) {
    check_vertex(from);
    check_vertex(to);
    require(index >= 0 && index < g_.n_bits_, "loaded index out of range");
    Edge e;
    e.from = from;
    e.to = to;
    e.kind = EdgeKind::Ordinary;
    e.index = index;
    e.w0 = std::move(w0);
    e.w1 = std::move(w1);
    e.stage = std::move(stage);
    return push(std::move(e));
  }

  EdgeId add_empty(VertexId from, VertexId to, std::string stage = {}) {
    check_vertex(from);
    check_vertex(to);
    Edge e;
    e.from = from;
    e.to = to;
    e.kind = EdgeKind::Empty;
    e.stage = std::move(stage);
    return push(std::move(e));
  }

  EdgeId add_super(VertexId from, VertexId to, GraphPtr inner, WeightRule factor = WeightRule::constant(1.0),
                   std::string stage = {}) {
    check_vertex(from);
    check_vertex(to);
    require(inner != nullptr, "super edge without an inner graph");
    require(inner->label(inner->root()).empty(), "super edge inner graph must be rooted at the empty label");
    Edge e;
    e.from = from;
    e.to = to;
    e.kind = EdgeKind::Super;
    e.inner = std::move(inner);
    e.factor = std::move(factor);
    e.stage = std::move(stage);
    return push(std::move(e));
  }

  /// Multiply both weight rules of e (or the factor of a super edge) by `factor`.
  void scale_edge(EdgeId e, const WeightRule& factor) {
    auto& ed = g_.edges_.at(e);
    if (ed.is_ordinary()) {
      ed.w0 = ed.w0.times(factor);
      ed.w1 = ed.w1.times(factor);
    } else if (ed.is_super()) {
      ed.factor = ed.factor.times(factor);
    }
  }

  void set_weights(EdgeId e, WeightRule w0, WeightRule w1) {
    auto& ed = g_.edges_.at(e);
    require(ed.is_ordinary(), "only ordinary edges carry weight rules");
    ed.w0 = std::move(w0);
    ed.w1 = std::move(w1);
  }

  void set_stage(EdgeId e, std::string stage) { g_.edges_.at(e).stage = std::move(stage); }

  void add_flow(Input y, EdgeId e, double value) {
    require(e < g_.edges_.size(), "flow on unknown edge");
    require(value >= 0.0 && std::isfinite(value), "flow values must be finite and nonnegative");
    if (value > 0.0) flows_[y][e] += value;
  }

  void add_default_flow(EdgeId e, double value) {
    require(e < g_.edges_.size(), "flow on unknown edge");
    require(value >= 0.0 && std::isfinite(value), "flow values must be finite and nonnegative");
    default_set_ = true;
    if (value > 0.0) default_[e] += value;
  }

  /// Record stage provenance; the first record for a name wins.
  void add_stage_info(StageInfo info) {
    for (const auto& s : g_.stages_)
      if (s.name == info.name) return;
    g_.stages_.push_back(std::move(info));
  }

  /// Copy `sub` into this graph with its root identified with `at` and every weight multiplied
  /// by `scale`. Labels are copied as they are.
  PlugMap plug(const LearningGraph& sub, VertexId at, const WeightRule& scale) {
    check_vertex(at);
    PlugMap map;
    map.vertex.resize(sub.vertex_count());
    for (VertexId v = 0; v < sub.vertex_count(); ++v)
      map.vertex[v] = (v == sub.root()) ? at : add_vertex(sub.label(v));
    map.edge.reserve(sub.edge_count());
    for (const auto& se : sub.edges()) {
      Edge e = se;
      e.from = map.vertex[se.from];
      e.to = map.vertex[se.to];
      EdgeId id = push(std::move(e));
      scale_edge(id, scale);
      map.edge.push_back(id);
    }
    for (const auto& info : sub.stages()) add_stage_info(info);
    return map;
  }

  /// Add `amount` times the flow of `sub` for y, routed through the copy described by `map`.
  void plug_flow(const LearningGraph& sub, const PlugMap& map, Input y, double amount) {
    const SparseFlow* flow = sub.flow_for(y);
    if (flow == nullptr && sub.edge_count() == 0) return;
    require(flow != nullptr, "plugged graph has no flow for input");
    for (const auto& f : *flow) add_flow(y, map.edge[f.edge], f.value * amount);
  }

  LearningGraph build() && {
    require(!g_.labels_.empty(), "learning graph without vertices");
    for (auto& [y, entries] : flows_) {
      SparseFlow flow;
      for (const auto& [e, v] : entries)
        if (v > 0.0) flow.push_back({e, v});
      g_.flows_[y] = std::move(flow);
    }
    if (default_set_) {
      SparseFlow flow;
      for (const auto& [e, v] : default_)
        if (v > 0.0) flow.push_back({e, v});
      g_.default_flow_ = std::move(flow);
    }
    return std::move(g_);
  }

 private:
  void check_vertex(VertexId v) const {
    require(v < g_.labels_.size(), "dangling vertex id " + std::to_string(v));
  }
  EdgeId push(Edge e) {
    g_.edges_.push_back(std::move(e));
    return static_cast<EdgeId>(g_.edges_.size() - 1);
  }

  LearningGraph g_;
  std::map<Input, std::map<EdgeId, double>> flows_;
  std::map<EdgeId, double> default_;
  bool default_set_ = false;
};

/// Net inflow minus outflow per vertex for a flow.
inline std::vector<double> flow_balance(const LearningGraph& g, const SparseFlow& flow) {
  std::vector<double> balance(g.vertex_count(), 0.0);
  for (const auto& f : flow) {
    const auto& e = g.edge(f.edge);
    balance[e.to] += f.value;
    balance[e.from] -= f.value;
  }
  return balance;
}

/// Vertices absorbing flow (net inflow above tol).
inline std::vector<VertexId> flow_sinks(const LearningGraph& g, const SparseFlow& flow, double tol = 1e-12) {
  auto balance = flow_balance(g, flow);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < balance.size(); ++v)
    if (balance[v] > tol) out.push_back(v);
  return out;
}

/// The common unique sink of every flow of g, if there is one.
inline std::optional<VertexId> unique_flow_sink(const LearningGraph& g) {
  std::optional<VertexId> sink;
  auto visit = [&](const SparseFlow& flow) {
    auto sinks = flow_sinks(g, flow);
    if (sinks.size() != 1) return false;
    if (sink && *sink != sinks.front()) return false;
    sink = sinks.front();
    return true;
  };
  for (const auto& [y, flow] : g.flows())
    if (!visit(flow)) return std::nullopt;
  if (g.default_flow() && !visit(*g.default_flow())) return std::nullopt;
  return sink;
}

}  // namespace lg
