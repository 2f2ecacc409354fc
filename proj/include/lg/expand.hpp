#pragma once

#include "lg/learning_graph.hpp"

namespace lg {

/// Replace every super edge by its (recursively expanded) inner graph: the inner root is
/// identified with the edge's tail, the unique flow sink with its head, inner labels are offset
/// by S(tail), inner weights pick up the edge factor, and incoming flow is routed through the
/// inner flow for the same input.
inline LearningGraph expand(const LearningGraph& g) {
  if (!g.has_super_edges()) return g;

  LearningGraph::Builder b(g.n_bits());
  for (VertexId v = 0; v < g.vertex_count(); ++v) b.add_vertex(g.label(v));
  b.set_root(g.root());

  struct Piece {
    std::vector<EdgeId> edges;       // non-super: one entry
    std::shared_ptr<LearningGraph> inner;
  };
  std::vector<Piece> pieces(g.edge_count());

  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    if (!e.is_super()) {
      EdgeId nid = e.is_ordinary() ? b.add_ordinary(e.from, e.to, e.index, e.w0, e.w1, e.stage)
                                   : b.add_empty(e.from, e.to, e.stage);
      pieces[id].edges.push_back(nid);
      continue;
    }
    auto inner = std::make_shared<LearningGraph>(expand(*e.inner));
    auto sink = unique_flow_sink(*inner);
    require(sink.has_value(), "super edge " + std::to_string(id) + " has no unique flow sink");
    const IndexSet offset = g.label(e.from);
    std::vector<VertexId> vmap(inner->vertex_count());
    for (VertexId v = 0; v < inner->vertex_count(); ++v) {
      if (v == inner->root())
        vmap[v] = e.from;
      else if (v == *sink)
        vmap[v] = e.to;
      else
        vmap[v] = b.add_vertex(offset | inner->label(v));
    }
    for (const Edge& ie : inner->edges()) {
      EdgeId nid = 0;
      if (ie.is_ordinary()) {
        nid = b.add_ordinary(vmap[ie.from], vmap[ie.to], ie.index, ie.w0.times(e.factor), ie.w1.times(e.factor),
                             e.stage);
      } else {
        nid = b.add_empty(vmap[ie.from], vmap[ie.to], e.stage);
      }
      pieces[id].edges.push_back(nid);
    }
    pieces[id].inner = std::move(inner);
  }

  auto route = [&](const SparseFlow& flow, Input y, bool is_default) {
    for (const auto& f : flow) {
      const auto& piece = pieces[f.edge];
      if (!piece.inner) {
        if (is_default)
          b.add_default_flow(piece.edges.front(), f.value);
        else
          b.add_flow(y, piece.edges.front(), f.value);
        continue;
      }
      const SparseFlow* inner_flow = is_default ? (piece.inner->default_flow() ? &*piece.inner->default_flow() : nullptr)
                                                : piece.inner->flow_for(y);
      require(inner_flow != nullptr, "super edge " + std::to_string(f.edge) + " has no inner flow for input");
      for (const auto& inf : *inner_flow) {
        if (is_default)
          b.add_default_flow(piece.edges[inf.edge], f.value * inf.value);
        else
          b.add_flow(y, piece.edges[inf.edge], f.value * inf.value);
      }
    }
  };
  for (const auto& [y, flow] : g.flows()) route(flow, y, false);
  if (g.default_flow()) route(*g.default_flow(), 0, true);
  for (const auto& info : g.stages()) b.add_stage_info(info);
  return std::move(b).build();
}

}  // namespace lg
