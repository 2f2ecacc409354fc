#pragma once

#include <set>
#include <vector>

#include "lg/lg.hpp"

namespace lg::testing {

struct Mutant {
  EdgeId edge = 0;
  Input negative = 0;
  Input positive = 0;
  double flow = 0.0;
  LearningGraph graph;
};

/// Single-weight mutants of a flat graph: w0 of one ordinary edge is multiplied by 4 on one pattern of
/// its head label, for a negative x crossing a positive y that routes more than `min_flow` through the edge.
inline std::vector<Mutant> linking_mutants(const LearningGraph& g, const BooleanFunction& f, std::size_t count,
                                           double min_flow = 1e-3) {
  require(!g.has_super_edges(), "mutants need a flat graph");
  std::vector<Mutant> out;
  std::set<std::pair<EdgeId, Input>> seen;
  const auto pos = f.positives(), neg = f.negatives();
  for (EdgeId id = 0; id < g.edge_count() && out.size() < count; ++id) {
    const Edge& e = g.edge(id);
    if (!e.is_ordinary()) continue;
    const std::uint64_t from = g.label(e.from).mask(), to = g.label(e.to).mask();
    for (Input y : pos) {
      if (out.size() >= count) break;
      const SparseFlow* flow = g.flow_for(y);
      const double p = flow ? flow_on(*flow, id) : 0.0;
      if (p <= min_flow) continue;
      for (Input x : neg) {
        if ((x & from) != (y & from) || bit(x, e.index) == bit(y, e.index)) continue;
        if (!seen.insert({id, x & to}).second) continue;
        auto w0 = WeightRule::table(g.label(e.to), {{x & to, 4.0 * e.w0(x)}}, e.w0);
        auto b = LearningGraph::Builder::from(g);
        b.set_weights(id, w0, e.w1);
        out.push_back({id, x, y, p, std::move(b).build()});
        break;
      }
    }
  }
  return out;
}

}  // namespace lg::testing
