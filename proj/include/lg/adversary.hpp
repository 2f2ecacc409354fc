#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "lg/boolean_function.hpp"
#include "lg/complexity.hpp"
#include "lg/expand.hpp"
#include "lg/learning_graph.hpp"
#include "lg/parallel.hpp"

namespace lg {

/// The matrices X_j, rows and columns indexed by the positions of f's domain.
struct AdversaryWitness {
  DomainPtr domain;
  std::vector<Eigen::MatrixXd> x;  // one per index j
};

/// Multiply all weights by √(C^1/C^0) so both maxima equal C(G).
inline LearningGraph rebalance_to_equal(const LearningGraph& g, const BooleanFunction& f) {
  const double c0 = max_c0(g, f), c1 = max_c1(g, f);
  require(c0 > 0.0 && c1 > 0.0, "cannot balance a graph with C0 = " + std::to_string(c0) + ", C1 = " + std::to_string(c1));
  return scale_weights(g, std::sqrt(c1 / c0));
}

/// X_j = Σ over edges e loading j and assignments α of ψ0ψ0ᵀ + ψ1ψ1ᵀ, with
/// ψ_b[z] = p_e(z)/√w^1(e) for positive z with z_j = 1−b and √w^0(e) for negative z with z_j = b,
/// both restricted to z agreeing with α on the tail label.
inline AdversaryWitness build_witness(const LearningGraph& g, const BooleanFunction& f, std::size_t cap = 4096) {
  require(!g.has_super_edges(), "expand super edges before building a witness");
  require(g.n_bits() == f.n_bits(), "graph and function differ in bit count");
  const auto& domain = f.inputs();
  require(domain.size() <= cap, "domain of " + std::to_string(domain.size()) + " inputs exceeds the witness cap");
  const int n = g.n_bits();
  const auto size = static_cast<Eigen::Index>(domain.size());

  std::vector<const SparseFlow*> flows(domain.size(), nullptr);
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (f.value_at(i)) flows[i] = g.flow_for(domain[i]);

  std::vector<std::vector<EdgeId>> by_index(static_cast<std::size_t>(n));
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).is_ordinary()) by_index[static_cast<std::size_t>(g.edge(e).index)].push_back(e);

  AdversaryWitness w;
  w.domain = f.domain();
  w.x.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(size, size));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    auto& xj = w.x[j];
    std::vector<std::pair<Eigen::Index, double>> psi[2];
    std::vector<std::pair<std::uint64_t, std::size_t>> order(domain.size());
    for (EdgeId id : by_index[j]) {
      const Edge& e = g.edge(id);
      const std::uint64_t from = g.label(e.from).mask();
      for (std::size_t i = 0; i < domain.size(); ++i) order[i] = {domain[i] & from, i};
      std::sort(order.begin(), order.end());
      std::size_t start = 0;
      while (start < order.size()) {
        std::size_t stop = start;
        while (stop < order.size() && order[stop].first == order[start].first) ++stop;
        psi[0].clear();
        psi[1].clear();
        for (std::size_t t = start; t < stop; ++t) {
          const std::size_t i = order[t].second;
          const Input z = domain[i];
          const int zj = bit(z, static_cast<int>(j)) ? 1 : 0;
          if (f.value_at(i)) {
            const double p = flows[i] ? flow_on(*flows[i], id) : 0.0;
            if (p == 0.0) continue;
            const double w1 = e.w1(z);
            require(w1 > 0.0, "flow on an edge with zero positive weight");
            psi[1 - zj].push_back({static_cast<Eigen::Index>(i), p / std::sqrt(w1)});
          } else {
            const double w0 = e.w0(z);
            if (w0 == 0.0) continue;
            psi[zj].push_back({static_cast<Eigen::Index>(i), std::sqrt(w0)});
          }
        }
        for (const auto& v : psi)
          for (const auto& [a, va] : v)
            for (const auto& [c, vc] : v) xj(a, c) += va * vc;
        start = stop;
      }
    }
  });
  return w;
}

struct WitnessReport {
  double min_eigenvalue = 0.0;
  int min_eigen_index = -1;
  bool psd = true;
  double worst_constraint_error = 0.0;
  std::optional<std::pair<Input, Input>> worst_pair;  // (negative, positive)
  bool constraints = true;
  double objective = 0.0;
  std::optional<double> expected_objective;
  bool objective_ok = true;
  bool ok() const { return psd && constraints && objective_ok; }
};

/// Feasibility of the adversary program: PSD X_j, unit sums on crossing pairs, and the objective
/// max_z Σ_j X_j[z,z] against `expected` when given.
inline WitnessReport verify_witness(const AdversaryWitness& w, const BooleanFunction& f, double tol,
                                    std::optional<double> expected = std::nullopt) {
  require(w.domain == f.domain(), "witness and function use different domains");
  const auto& domain = f.inputs();
  WitnessReport r;
  const std::size_t n = w.x.size();

  std::vector<double> mins(n, 0.0);
  parallel_for(n, [&](std::size_t j) {
    if (w.x[j].size() == 0) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w.x[j], Eigen::EigenvaluesOnly);
    require(solver.info() == Eigen::Success, "eigensolver failed");
    mins[j] = solver.eigenvalues().minCoeff();
  });
  r.min_eigenvalue = mins.empty() ? 0.0 : mins.front();
  r.min_eigen_index = mins.empty() ? -1 : 0;
  for (std::size_t j = 0; j < n; ++j) {
    double sym = (w.x[j] - w.x[j].transpose()).cwiseAbs().maxCoeff();
    if (sym > tol) r.psd = false;
    if (mins[j] < r.min_eigenvalue) {
      r.min_eigenvalue = mins[j];
      r.min_eigen_index = static_cast<int>(j);
    }
  }
  if (r.min_eigenvalue < -tol) r.psd = false;

  std::vector<std::size_t> neg, pos;
  for (std::size_t i = 0; i < domain.size(); ++i) (f.value_at(i) ? pos : neg).push_back(i);
  std::vector<double> worst(neg.size(), 0.0);
  std::vector<std::size_t> worst_at(neg.size(), 0);
  parallel_for(neg.size(), [&](std::size_t a) {
    const std::size_t xi = neg[a];
    for (std::size_t b = 0; b < pos.size(); ++b) {
      const std::size_t yi = pos[b];
      const Input diff = domain[xi] ^ domain[yi];
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if ((diff >> j) & 1U) s += w.x[j](static_cast<Eigen::Index>(xi), static_cast<Eigen::Index>(yi));
      const double err = std::abs(s - 1.0);
      if (err > worst[a] || (b == 0 && worst[a] == 0.0)) {
        worst[a] = err;
        worst_at[a] = yi;
      }
    }
  });
  for (std::size_t a = 0; a < neg.size(); ++a) {
    if (pos.empty()) break;
    if (!r.worst_pair || worst[a] > r.worst_constraint_error) {
      r.worst_constraint_error = worst[a];
      r.worst_pair = std::make_pair(domain[neg[a]], domain[worst_at[a]]);
    }
  }
  r.constraints = r.worst_constraint_error <= tol;

  for (std::size_t i = 0; i < domain.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += w.x[j](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    r.objective = std::max(r.objective, s);
  }
  if (expected) {
    r.expected_objective = expected;
    r.objective_ok = std::abs(r.objective - *expected) <= tol * std::max(1.0, std::abs(*expected));
  }
  return r;
}

struct AdversaryRun {
  double c0 = 0.0;
  double c1 = 0.0;
  double complexity = 0.0;
  WitnessReport report;
};

/// Expand, balance, build and verify; the objective is compared against C(G).
inline AdversaryRun adversary_check(const LearningGraph& g, const BooleanFunction& f, double tol) {
  AdversaryRun run;
  LearningGraph flat = expand(g);
  run.c0 = max_c0(flat, f);
  run.c1 = max_c1(flat, f);
  run.complexity = std::sqrt(run.c0 * run.c1);
  LearningGraph balanced = rebalance_to_equal(flat, f);
  run.report = verify_witness(build_witness(balanced, f), f, tol, run.complexity);
  return run;
}

}  // namespace lg
