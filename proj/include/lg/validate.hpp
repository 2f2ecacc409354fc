#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lg/boolean_function.hpp"
#include "lg/expand.hpp"
#include "lg/learning_graph.hpp"
#include "lg/parallel.hpp"

namespace lg {

enum class LinkingMode { Semantic, Structural };

struct Violation {
  std::string kind;
  std::string message;
  std::optional<EdgeId> edge;
  std::optional<Input> input;
  std::optional<std::string> assignment;
  /// Edge ids refer to the expanded graph.
  bool expanded = false;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t suppressed = 0;
  bool ok() const { return violations.empty() && suppressed == 0; }
  bool has(const std::string& kind) const {
    for (const auto& v : violations)
      if (v.kind == kind) return true;
    return false;
  }
};

struct ValidationOptions {
  LinkingMode linking = LinkingMode::Semantic;
  double tol = 1e-9;
  /// Structural linking enumerates at most 2^cap assignments per edge.
  int structural_bit_cap = 20;
  std::size_t max_violations = 256;
};

namespace detail {

class Collector {
 public:
  Collector(ValidationReport& r, std::size_t cap) : r_(r), cap_(cap) {}
  void add(Violation v) {
    if (r_.violations.size() < cap_)
      r_.violations.push_back(std::move(v));
    else
      ++r_.suppressed;
  }

 private:
  ValidationReport& r_;
  std::size_t cap_;
};

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Acyclicity, reachability from the root, root label and label increments.
inline void check_shape(const LearningGraph& g, Collector& out, bool expanded) {
  if (!g.label(g.root()).empty()) out.add({"root-label", "root label is not empty", {}, {}, {}, expanded});

  const auto out_edges = g.out_edges();
  std::vector<int> indeg(g.vertex_count(), 0);
  for (const auto& e : g.edges()) ++indeg[e.to];
  std::vector<VertexId> order;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (EdgeId e : out_edges[order[i]])
      if (--indeg[g.edge(e).to] == 0) order.push_back(g.edge(e).to);
  if (order.size() != g.vertex_count())
    out.add({"cycle", "underlying digraph has a directed cycle", {}, {}, {}, expanded});

  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexId> stack{g.root()};
  seen[g.root()] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (EdgeId e : out_edges[v]) {
      VertexId w = g.edge(e).to;
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!seen[v]) out.add({"unreachable", "vertex " + std::to_string(v) + " is not reachable from the root", {}, {}, {}, expanded});

  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    const IndexSet from = g.label(e.from), to = g.label(e.to);
    auto bad = [&](const std::string& why) { out.add({"label-increment", why, id, {}, {}, expanded}); };
    if (e.is_ordinary()) {
      if (from.contains(e.index))
        bad("edge loads index " + std::to_string(e.index + 1) + " already in its tail label");
      IndexSet want = from;
      want.insert(e.index);
      if (to != want) bad("head label is not tail label plus the loaded index");
      IndexSet allowed = to;
      if (!allowed.contains(e.w0.support() | e.w1.support()))
        out.add({"weight-support", "weight depends on indices outside the head label", id, {}, {}, expanded});
    } else if (e.is_empty()) {
      if (to != from) bad("empty transition between different labels");
    } else {
      auto sink = unique_flow_sink(*e.inner);
      if (!sink) {
        out.add({"super-edge", "super edge has no unique flow sink", id, {}, {}, expanded});
        continue;
      }
      const IndexSet loaded = e.inner->label(*sink);
      if (to != (from | loaded) || to == from) bad("head label is not tail label plus the super edge's loaded set");
      if (!to.contains(e.factor.support()))
        out.add({"weight-support", "super edge factor depends on indices outside the head label", id, {}, {}, expanded});
    }
  }
}

inline void check_linking_structural(const LearningGraph& g, const ValidationOptions& opt, Collector& out,
                                     bool expanded) {
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    if (!e.is_ordinary()) continue;
    IndexSet free = (e.w0.support() | e.w1.support());
    free = free - IndexSet(std::uint64_t{1} << e.index);
    if (free.size() > opt.structural_bit_cap) {
      out.add({"linking-cap", "structural linking check skipped: too many assignment bits", id, {}, {}, expanded});
      continue;
    }
    const auto bits = free.to_vector();
    const std::uint64_t count = std::uint64_t{1} << bits.size();
    for (std::uint64_t a = 0; a < count; ++a) {
      Input z = 0;
      for (std::size_t i = 0; i < bits.size(); ++i)
        if ((a >> i) & 1U) z |= Input{1} << bits[i];
      for (int c = 0; c <= 1; ++c) {
        const Input zc = c ? (z | (Input{1} << e.index)) : z;
        const Input zf = zc ^ (Input{1} << e.index);
        const double w0 = e.w0(zc), w1 = e.w1(zf);
        if (!close(w0, w1, opt.tol)) {
          out.add({"linking",
                   "w0 = " + std::to_string(w0) + " differs from w1 = " + std::to_string(w1) + " at c = " + std::to_string(c),
                   id, {}, PartialAssignment::of(z, g.label(e.from)).key(), expanded});
          break;
        }
      }
    }
  }
}

inline void check_linking_semantic(const LearningGraph& g, const BooleanFunction& f, const ValidationOptions& opt,
                                   Collector& out, bool expanded) {
  const auto& domain = f.inputs();
  std::vector<std::vector<Violation>> found(g.edge_count());
  parallel_for(g.edge_count(), [&](std::size_t id) {
    const Edge& e = g.edge(static_cast<EdgeId>(id));
    if (!e.is_ordinary()) return;
    const std::uint64_t from = g.label(e.from).mask();
    // per α: representative negative / positive input for each value of z_j (index into domain, +1; 0 = none)
    struct Slot {
      std::size_t neg[2] = {0, 0};
      std::size_t pos[2] = {0, 0};
    };
    std::unordered_map<std::uint64_t, Slot> slots;
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const Input z = domain[i];
      auto& s = slots[z & from];
      const int c = bit(z, e.index) ? 1 : 0;
      auto& cell = f.value_at(i) ? s.pos[c] : s.neg[c];
      if (cell == 0) cell = i + 1;
    }
    std::vector<std::pair<std::uint64_t, Slot>> sorted(slots.begin(), slots.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [alpha, s] : sorted) {
      for (int c = 0; c <= 1; ++c) {
        if (s.neg[c] == 0 || s.pos[1 - c] == 0) continue;
        const Input x = domain[s.neg[c] - 1], y = domain[s.pos[1 - c] - 1];
        const double w0 = e.w0(x), w1 = e.w1(y);
        if (!close(w0, w1, opt.tol)) {
          found[id].push_back({"linking",
                               "w0(x) = " + std::to_string(w0) + " differs from w1(y) = " + std::to_string(w1) +
                                   " with x = " + to_bitstring(x, f.n_bits()) + ", c = " + std::to_string(c),
                               static_cast<EdgeId>(id), y, PartialAssignment::of(alpha, g.label(e.from)).key(),
                               expanded});
        }
      }
    }
  });
  for (auto& list : found)
    for (auto& v : list) out.add(std::move(v));
}

inline void check_flows(const LearningGraph& g, const BooleanFunction& f, const ValidationOptions& opt, Collector& out,
                        bool expanded) {
  const auto positives = f.positives();
  std::vector<std::vector<Violation>> found(positives.size());
  parallel_for(positives.size(), [&](std::size_t i) {
    const Input y = positives[i];
    auto& list = found[i];
    const SparseFlow* flow = g.flow_for(y);
    if (flow == nullptr) {
      if (g.edge_count() == 0 && f.is_one_certificate(y, g.label(g.root()))) return;
      list.push_back({"missing-flow", "no flow for positive input", {}, y, {}, expanded});
      return;
    }
    if (flow->empty()) {
      // a flow that never leaves the root ends there
      if (!f.is_one_certificate(y, g.label(g.root())))
        list.push_back({"uncertified-sink", "empty flow and the root label is not a certificate", {}, y, {}, expanded});
      return;
    }
    const auto balance = flow_balance(g, *flow);
    if (std::abs(balance[g.root()] + 1.0) > opt.tol)
      list.push_back({"unit-flow", "net outflow of the root is " + std::to_string(-balance[g.root()]), {}, y, {}, expanded});
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (v != g.root() && balance[v] < -opt.tol)
        list.push_back({"unit-flow", "vertex " + std::to_string(v) + " emits more flow than it receives", {}, y, {}, expanded});
    for (const auto& fe : *flow) {
      const Edge& e = g.edge(fe.edge);
      const bool zero = e.is_ordinary() ? e.w1(y) == 0.0 : e.is_super() ? e.factor(y) == 0.0 : false;
      if (zero) list.push_back({"flow-on-zero-weight", "positive flow on an edge with zero positive weight", fe.edge, y, {}, expanded});
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (v == g.root() || balance[v] <= opt.tol) continue;
      if (!f.is_one_certificate(y, g.label(v)))
        list.push_back({"uncertified-sink",
                        "flow sink " + std::to_string(v) + " label is not a 1-certificate", {}, y,
                        PartialAssignment::of(y, g.label(v)).key(), expanded});
    }
  });
  for (auto& list : found)
    for (auto& v : list) out.add(std::move(v));
}

}  // namespace detail

/// Check every condition of an extended learning graph for f. Conditions on weights and flows are
/// checked on the expansion when g has super edges; the super edges themselves are checked for a
/// unique sink and a consistent label increment.
inline ValidationReport validate(const LearningGraph& g, const BooleanFunction& f, const ValidationOptions& opt = {}) {
  ValidationReport report;
  detail::Collector out(report, opt.max_violations);
  if (g.n_bits() != f.n_bits()) {
    out.add({"bit-count", "graph has N = " + std::to_string(g.n_bits()) + " but function has N = " + std::to_string(f.n_bits())});
    return report;
  }
  if (auto bad = find_bad_certificate(f))
    out.add({"bad-certificate", "certificate oracle returns a set that does not force f = 1", {}, *bad});
  detail::check_shape(g, out, false);
  if (!report.ok()) return report;

  std::optional<LearningGraph> flat;
  if (g.has_super_edges()) {
    try {
      flat = expand(g);
    } catch (const Error& err) {
      out.add({"super-edge", err.what()});
      return report;
    }
  }
  const LearningGraph& h = flat ? *flat : g;
  const bool expanded = flat.has_value();
  if (opt.linking == LinkingMode::Semantic)
    detail::check_linking_semantic(h, f, opt, out, expanded);
  else
    detail::check_linking_structural(h, opt, out, expanded);
  detail::check_flows(h, f, opt, out, expanded);
  return report;
}

/// Function-free checks for building blocks: shape, structural linking, and unit flows with the
/// single common sink a super edge requires.
inline ValidationReport validate_gadget(const LearningGraph& g, const ValidationOptions& opt = {}) {
  ValidationReport report;
  detail::Collector out(report, opt.max_violations);
  detail::check_shape(g, out, false);
  if (!report.ok()) return report;
  const LearningGraph h = expand(g);
  detail::check_linking_structural(h, opt, out, g.has_super_edges());
  if (!unique_flow_sink(h)) out.add({"super-edge", "flows do not share a unique sink"});
  auto check = [&](const SparseFlow& flow, std::optional<Input> y) {
    auto balance = flow_balance(h, flow);
    if (std::abs(balance[h.root()] + 1.0) > opt.tol)
      out.add({"unit-flow", "net outflow of the root is " + std::to_string(-balance[h.root()]), {}, y});
  };
  for (const auto& [y, flow] : h.flows()) check(flow, y);
  if (h.default_flow()) check(*h.default_flow(), std::nullopt);
  return report;
}

}  // namespace lg
