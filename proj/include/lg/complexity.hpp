#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lg/boolean_function.hpp"
#include "lg/learning_graph.hpp"
#include "lg/parallel.hpp"

namespace lg {

inline double c0_all(const LearningGraph& g, Input x);
inline double c1_all(const LearningGraph& g, Input y);

/// Negative contribution of one edge: w^0 for ordinary edges, factor·C^0(inner) for super edges.
inline double edge_c0(const LearningGraph& g, EdgeId id, Input x) {
  const Edge& e = g.edge(id);
  switch (e.kind) {
    case EdgeKind::Ordinary:
      return e.w0(x);
    case EdgeKind::Super: {
      const double f = e.factor(x);
      return f == 0.0 ? 0.0 : f * c0_all(*e.inner, x);
    }
    case EdgeKind::Empty:
      break;
  }
  return 0.0;
}

/// Positive contribution of one edge carrying flow p: p²/w^1, or p²·C^1(inner)/factor.
/// Zero flow contributes zero whatever the weight.
inline double edge_c1(const LearningGraph& g, EdgeId id, Input y, double p) {
  if (p == 0.0) return 0.0;
  const Edge& e = g.edge(id);
  switch (e.kind) {
    case EdgeKind::Ordinary: {
      const double w = e.w1(y);
      require(w > 0.0, "flow " + std::to_string(p) + " on edge " + std::to_string(id) + " with zero positive weight");
      return p * p / w;
    }
    case EdgeKind::Super: {
      const double f = e.factor(y);
      require(f > 0.0, "flow on super edge " + std::to_string(id) + " with zero factor");
      return p * p * c1_all(*e.inner, y) / f;
    }
    case EdgeKind::Empty:
      break;
  }
  return 0.0;
}

inline double c0_all(const LearningGraph& g, Input x) {
  double s = 0.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) s += edge_c0(g, e, x);
  return s;
}

inline double c1_all(const LearningGraph& g, Input y) {
  const SparseFlow* flow = g.flow_for(y);
  if (flow == nullptr) {
    require(g.edge_count() == 0, "no flow for input " + to_bitstring(y, g.n_bits()));
    return 0.0;
  }
  double s = 0.0;
  for (const auto& f : *flow) s += edge_c1(g, f.edge, y, f.value);
  return s;
}

/// C^0(F, x) over an edge subset, summed in edge order.
inline double c0(const LearningGraph& g, const std::vector<EdgeId>& edges, Input x) {
  double s = 0.0;
  for (EdgeId e : edges) s += edge_c0(g, e, x);
  return s;
}

inline double c1(const LearningGraph& g, const std::vector<EdgeId>& edges, Input y) {
  const SparseFlow* flow = g.flow_for(y);
  require(flow != nullptr || g.edge_count() == 0, "no flow for input " + to_bitstring(y, g.n_bits()));
  double s = 0.0;
  for (EdgeId e : edges) s += edge_c1(g, e, y, flow ? flow_on(*flow, e) : 0.0);
  return s;
}

inline double c0(const LearningGraph& g, Input x) { return c0_all(g, x); }
inline double c1(const LearningGraph& g, Input y) { return c1_all(g, y); }

/// Edge complexities of a super edge viewed on its own: c^0(e, x) and c^1(e, y) at unit flow.
inline double super_c0(const LearningGraph& g, EdgeId e, Input x) { return edge_c0(g, e, x); }
inline double super_c1(const LearningGraph& g, EdgeId e, Input y) { return edge_c1(g, e, y, 1.0); }

struct StageComplexity {
  std::string name;
  std::vector<EdgeId> edges;
  std::map<Input, double> c0;  // per negative input
  std::map<Input, double> c1;  // per positive input
  double c0_max = 0.0;
  double c1_max = 0.0;
  double c = 0.0;
  /// Largest deviation from 1 of the flow entering the stage, over positive inputs.
  double inflow_error = 0.0;
  std::optional<StageInfo> provenance;
};

struct ComplexityReport {
  std::vector<StageComplexity> stages;
  StageComplexity total;
};

namespace detail {

inline void finish(StageComplexity& s) {
  s.c0_max = 0.0;
  s.c1_max = 0.0;
  for (const auto& [x, v] : s.c0) s.c0_max = std::max(s.c0_max, v);
  for (const auto& [y, v] : s.c1) s.c1_max = std::max(s.c1_max, v);
  s.c = std::sqrt(s.c0_max * s.c1_max);
}

/// Flow through edges of F whose tail is not the head of another edge of F.
inline double stage_inflow(const LearningGraph& g, const std::vector<EdgeId>& edges, const SparseFlow& flow) {
  std::vector<char> head(g.vertex_count(), 0);
  for (EdgeId e : edges) head[g.edge(e).to] = 1;
  double in = 0.0;
  for (EdgeId e : edges)
    if (!head[g.edge(e).from]) in += flow_on(flow, e);
  return in;
}

}  // namespace detail

/// Definition-4 report for the whole graph and for every stage tag present on its edges.
inline ComplexityReport complexity(const LearningGraph& g, const BooleanFunction& f) {
  require(g.n_bits() == f.n_bits(), "graph and function differ in bit count");
  ComplexityReport report;
  report.total.name = "total";
  for (EdgeId e = 0; e < g.edge_count(); ++e) report.total.edges.push_back(e);

  std::map<std::string, std::size_t> index;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& tag = g.edge(e).stage;
    if (tag.empty()) continue;
    auto [it, fresh] = index.emplace(tag, report.stages.size());
    if (fresh) {
      report.stages.push_back({});
      report.stages.back().name = tag;
      for (const auto& info : g.stages())
        if (info.name == tag) report.stages.back().provenance = info;
    }
    report.stages[it->second].edges.push_back(e);
  }

  const auto& domain = f.inputs();
  const std::size_t ns = report.stages.size();
  // rows[i][0] = total, rows[i][1 + s] = stage s
  std::vector<std::vector<double>> rows(domain.size(), std::vector<double>(ns + 1, 0.0));
  std::vector<std::vector<double>> inflow(domain.size(), std::vector<double>(ns, 1.0));
  parallel_for(domain.size(), [&](std::size_t i) {
    const Input z = domain[i];
    if (!f.value_at(i)) {
      std::vector<double> per_edge(g.edge_count());
      for (EdgeId e = 0; e < g.edge_count(); ++e) per_edge[e] = edge_c0(g, e, z);
      for (double v : per_edge) rows[i][0] += v;
      for (std::size_t s = 0; s < ns; ++s)
        for (EdgeId e : report.stages[s].edges) rows[i][1 + s] += per_edge[e];
    } else {
      const SparseFlow* flow = g.flow_for(z);
      require(flow != nullptr || g.edge_count() == 0, "no flow for positive input " + to_bitstring(z, g.n_bits()));
      if (flow == nullptr) return;
      std::vector<double> per_edge(g.edge_count(), 0.0);
      for (const auto& fe : *flow) per_edge[fe.edge] = edge_c1(g, fe.edge, z, fe.value);
      for (double v : per_edge) rows[i][0] += v;
      for (std::size_t s = 0; s < ns; ++s) {
        for (EdgeId e : report.stages[s].edges) rows[i][1 + s] += per_edge[e];
        inflow[i][s] = detail::stage_inflow(g, report.stages[s].edges, *flow);
      }
    }
  });

  for (std::size_t i = 0; i < domain.size(); ++i) {
    const Input z = domain[i];
    auto& target = f.value_at(i) ? report.total.c1 : report.total.c0;
    target[z] = rows[i][0];
    for (std::size_t s = 0; s < ns; ++s) {
      auto& st = report.stages[s];
      (f.value_at(i) ? st.c1 : st.c0)[z] = rows[i][1 + s];
      if (f.value_at(i)) st.inflow_error = std::max(st.inflow_error, std::abs(inflow[i][s] - 1.0));
    }
  }
  detail::finish(report.total);
  for (auto& s : report.stages) detail::finish(s);
  return report;
}

/// max_x C^0(G, x) over the negatives of f.
inline double max_c0(const LearningGraph& g, const BooleanFunction& f) {
  const auto neg = f.negatives();
  std::vector<double> v(neg.size());
  parallel_for(neg.size(), [&](std::size_t i) { v[i] = c0_all(g, neg[i]); });
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

/// max_y C^1(G, y) over the positives of f.
inline double max_c1(const LearningGraph& g, const BooleanFunction& f) {
  const auto pos = f.positives();
  std::vector<double> v(pos.size());
  parallel_for(pos.size(), [&](std::size_t i) { v[i] = c1_all(g, pos[i]); });
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

inline double total_complexity(const LearningGraph& g, const BooleanFunction& f) {
  return std::sqrt(max_c0(g, f) * max_c1(g, f));
}

/// Copy of g with every weight (both sides, super factors included) multiplied by `factor`.
inline LearningGraph scale_weights(const LearningGraph& g, double factor) {
  auto b = LearningGraph::Builder::from(g);
  const auto rule = WeightRule::constant(factor);
  for (EdgeId e = 0; e < g.edge_count(); ++e) b.scale_edge(e, rule);
  return std::move(b).build();
}

}  // namespace lg
