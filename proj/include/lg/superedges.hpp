#pragma once

#include <string>

#include "lg/learning_graph.hpp"

namespace lg {

enum class LoadKind { Dense, Sparse };

inline const char* to_string(LoadKind k) { return k == LoadKind::Dense ? "dense" : "sparse"; }

inline LoadKind parse_load_kind(const std::string& s) {
  if (s == "dense") return LoadKind::Dense;
  if (s == "sparse") return LoadKind::Sparse;
  throw Error("unknown load kind '" + s + "'");
}

/// Weight rules (w^0, w^1) of the k-th edge (0-based) of a load path over `set`, in ascending order.
inline std::pair<WeightRule, WeightRule> load_step_rules(LoadKind kind, IndexSet set, int k) {
  const auto order = set.to_vector();
  const int size = static_cast<int>(order.size());
  require(k >= 0 && k < size, "load step out of range");
  if (kind == LoadKind::Dense) {
    auto w = WeightRule::dense_load(size);
    return {w, w};
  }
  IndexSet prefix;
  for (int i = 0; i < k; ++i) prefix.insert(order[static_cast<std::size_t>(i)]);
  const int j = order[static_cast<std::size_t>(k)];
  return {WeightRule::sparse_load(j, prefix, size, 0), WeightRule::sparse_load(j, prefix, size, 1)};
}

/// Path ∅ → {s1} → {s1,s2} → ... → S loading S in ascending order, with unit flow on every edge
/// for every input. Dense: every weight |S|. Sparse: 3(|z_prefix|+1)·ln(|S|+1) when z_j = b and
/// 3|S|·ln(|S|+1) otherwise.
inline GraphPtr load_gadget(LoadKind kind, IndexSet set, int n_bits) {
  require(!set.empty(), "load gadget over an empty set");
  require(set.bound() <= n_bits, "load set exceeds the bit count");
  LearningGraph::Builder b(n_bits);
  VertexId prev = b.add_vertex(IndexSet{});
  b.set_root(prev);
  IndexSet label;
  const auto order = set.to_vector();
  for (int k = 0; k < static_cast<int>(order.size()); ++k) {
    label.insert(order[static_cast<std::size_t>(k)]);
    VertexId next = b.add_vertex(label);
    auto [w0, w1] = load_step_rules(kind, set, k);
    EdgeId e = b.add_ordinary(prev, next, order[static_cast<std::size_t>(k)], std::move(w0), std::move(w1));
    b.add_default_flow(e, 1.0);
    prev = next;
  }
  return std::make_shared<const LearningGraph>(std::move(b).build());
}

inline GraphPtr dense_load(IndexSet set, int n_bits) { return load_gadget(LoadKind::Dense, set, n_bits); }
inline GraphPtr sparse_load(IndexSet set, int n_bits) { return load_gadget(LoadKind::Sparse, set, n_bits); }

/// Add an edge loading `set` between two vertices whose labels differ by exactly `set`:
/// an empty transition for ∅, an ordinary edge for a singleton, a super edge otherwise.
inline EdgeId add_load(LearningGraph::Builder& b, VertexId from, VertexId to, LoadKind kind, IndexSet set,
                       const std::string& stage = {}) {
  if (set.empty()) return b.add_empty(from, to, stage);
  if (set.size() == 1) {
    auto [w0, w1] = load_step_rules(kind, set, 0);
    return b.add_ordinary(from, to, set.to_vector().front(), std::move(w0), std::move(w1), stage);
  }
  return b.add_super(from, to, load_gadget(kind, set, b.n_bits()), WeightRule::constant(1.0), stage);
}

}  // namespace lg
