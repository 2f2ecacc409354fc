#pragma once

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lg/adversary.hpp"
#include "lg/complexity.hpp"
#include "lg/corpus.hpp"
#include "lg/costmodel.hpp"
#include "lg/json_io.hpp"
#include "lg/oracles.hpp"
#include "lg/parallel.hpp"
#include "lg/superedges.hpp"
#include "lg/triangle.hpp"
#include "lg/validate.hpp"

namespace lg::cli {

using io::json;

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Usage problem detected after parsing (bad combination of flags, out-of-range values).
struct UsageError : Error {
  using Error::Error;
};

inline json error_json(const std::string& kind, const std::string& message, const std::string& where = {}) {
  json e = {{"kind", kind}, {"message", message}};
  if (!where.empty()) e["where"] = where;
  return {{"error", e}};
}

inline std::vector<int> parse_int_list(const std::string& s, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not an integer");
    }
  }
  return out;
}

inline std::uint64_t vertex_mask(const std::vector<int>& vs, int n, const std::string& flag) {
  std::uint64_t m = 0;
  for (int v : vs) {
    if (v < 0 || v >= n) throw UsageError(flag + ": vertex " + std::to_string(v) + " outside [0, " + std::to_string(n) + ")");
    m |= std::uint64_t{1} << v;
  }
  return m;
}

struct GraphArgs {
  std::string graph;
  std::string function;
};

inline LearningGraph load_graph(const std::string& path) { return io::graph_from_json(io::read_file(path), path + "#"); }
inline BooleanFunction load_function(const std::string& path) {
  return io::function_from_json(io::read_file(path), path + "#");
}

inline json graph_summary(const LearningGraph& g) {
  std::size_t supers = 0;
  for (const auto& e : g.edges()) supers += e.is_super() ? 1 : 0;
  return {{"bits", g.n_bits()}, {"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"super_edges", supers}};
}

inline json optimum_json(const cost::Optimum& o) {
  auto t = [](const cost::Tunables& p) { return json{{"x", p.x}, {"a", p.a}, {"b", p.b}}; };
  return {{"params", t(o.params)}, {"cost", o.cost}, {"integral", t(o.integral)}, {"integral_cost", o.integral_cost},
          {"closed_form", t(o.closed_form)}, {"closed_form_cost", o.closed_form_cost}};
}

/// Runs one invocation; the report (or error object) goes to `out`, help text too.
inline int run(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Extended learning graphs: validation, complexity, adversary witnesses, triangle builders"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Expand all help");

  int status = kOk;
  std::function<void()> action;

  // validate
  GraphArgs va;
  bool structural = false;
  double vtol = 1e-9;
  auto* validate_cmd = app.add_subcommand("validate", "Check a learning graph against a function");
  validate_cmd->add_option("graph", va.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--function,-f", va.function, "Truth-table JSON")->required()->check(CLI::ExistingFile);
  validate_cmd->add_flag("--structural", structural, "Check linking over all assignments, not only realizable pairs");
  validate_cmd->add_option("--tol", vtol, "Flow tolerance");
  validate_cmd->callback([&] {
    action = [&] {
      auto g = load_graph(va.graph);
      auto f = load_function(va.function);
      ValidationOptions opt;
      opt.tol = vtol;
      opt.linking = structural ? LinkingMode::Structural : LinkingMode::Semantic;
      auto rep = validate(g, f, opt);
      out << io::dump(io::to_json(rep, g.n_bits()));
      status = rep.ok() ? kOk : kCheckFailed;
    };
  });

  // complexity
  GraphArgs ca;
  auto* complexity_cmd = app.add_subcommand("complexity", "Per-stage and total complexities");
  complexity_cmd->add_option("graph", ca.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  complexity_cmd->add_option("--function,-f", ca.function, "Truth-table JSON")->required()->check(CLI::ExistingFile);
  complexity_cmd->callback([&] {
    action = [&] {
      auto g = load_graph(ca.graph);
      auto f = load_function(ca.function);
      out << io::dump(io::to_json(complexity(g, f), g.n_bits()));
    };
  });

  // adversary
  GraphArgs aa;
  double atol = 1e-9;
  auto* adversary_cmd = app.add_subcommand("adversary", "Build and verify the adversary witness");
  adversary_cmd->add_option("graph", aa.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  adversary_cmd->add_option("--function,-f", aa.function, "Truth-table JSON")->required()->check(CLI::ExistingFile);
  adversary_cmd->add_option("--tol", atol, "Tolerance for PSD, constraints and objective");
  adversary_cmd->callback([&] {
    action = [&] {
      auto g = load_graph(aa.graph);
      auto f = load_function(aa.function);
      auto rep = validate(g, f);
      if (!rep.ok()) {
        out << io::dump({{"ok", false}, {"validation", io::to_json(rep, g.n_bits())}});
        status = kCheckFailed;
        return;
      }
      auto run = adversary_check(g, f, atol);
      json j = io::to_json(run.report, g.n_bits());
      j["c0"] = run.c0;
      j["c1"] = run.c1;
      j["complexity"] = run.complexity;
      out << io::dump(j);
      status = run.report.ok() ? kOk : kCheckFailed;
    };
  });

  // build
  std::string kind, output;
  int bn = 4, bx = 1, ba = 2, bb = 2, bsize = 1;
  std::string bset;
  auto* build_cmd = app.add_subcommand("build", "Materialize a learning graph or function");
  build_cmd
      ->add_option("kind", kind, "triangle-dense | triangle-sparse | triangle-sparsenew | triangle-function | dense-load | sparse-load")
      ->required()
      ->check(CLI::IsMember({"triangle-dense", "triangle-sparse", "triangle-sparsenew", "triangle-function", "dense-load",
                             "sparse-load"}));
  build_cmd->add_option("--n", bn, "Vertices (triangle) or bits");
  build_cmd->add_option("--x", bx, "Size of X");
  build_cmd->add_option("--a", ba, "Size of A");
  build_cmd->add_option("--b", bb, "Size of B");
  build_cmd->add_option("--size", bsize, "Load gadget size");
  build_cmd->add_option("--set", bset, "Load gadget index set, comma separated (default 0..size-1)");
  build_cmd->add_option("-o,--output", output, "Write the JSON here instead of standard output");
  build_cmd->callback([&] {
    action = [&] {
      json doc, summary;
      if (kind == "triangle-function") {
        if (bn < 3 || bn > 5) throw UsageError("--n must be in [3, 5]");
        auto f = triangle::triangle_function(bn);
        doc = io::to_json(f);
        summary = {{"kind", kind}, {"n", bn}, {"bits", f.n_bits()}, {"positives", f.positives().size()}};
      } else if (kind == "dense-load" || kind == "sparse-load") {
        IndexSet s = bset.empty() ? IndexSet::range(bsize) : IndexSet::from_indices(parse_int_list(bset, "--set"));
        if (s.empty()) throw UsageError("load gadget needs a nonempty set");
        const auto lk = kind == "dense-load" ? LoadKind::Dense : LoadKind::Sparse;
        auto g = load_gadget(lk, s, s.bound());
        doc = io::to_json(*g);
        summary = graph_summary(*g);
        summary["kind"] = kind;
      } else {
        const auto v = triangle::parse_variant(kind.substr(9));
        const triangle::Params p{bx, ba, bb};
        try {
          triangle::check_params(v, bn, p);
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
        auto c = triangle::build(v, bn, p);
        doc = io::to_json(*c.graph);
        summary = graph_summary(*c.graph);
        summary["kind"] = kind;
        summary["n"] = bn;
        summary["params"] = {{"x", bx}, {"a", ba}, {"b", bb}};
        summary["c0"] = max_c0(*c.graph, c.function);
        summary["c1"] = max_c1(*c.graph, c.function);
        summary["complexity"] = total_complexity(*c.graph, c.function);
        summary["positives"] = c.function.positives().size();
      }
      if (output.empty()) {
        out << io::dump(doc);
      } else {
        io::write_file(output, doc);
        summary["output"] = output;
        out << io::dump(summary);
      }
    };
  });

  // oracle
  std::string lemma, ograph, oset, onset;
  int ob = 0, ox = 1, oy = 1, ov1 = 0, on = 4;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact expectations by enumeration");
  oracle_cmd->add_option("lemma", lemma, "delta | ninter | ninter-sq | edge | sweep-delta | sweep-ninter | sweep-ninter-sq | sweep-edge")
      ->required()
      ->check(CLI::IsMember({"delta", "ninter", "ninter-sq", "edge", "sweep-delta", "sweep-ninter", "sweep-ninter-sq",
                             "sweep-edge"}));
  oracle_cmd->add_option("--graph", ograph, "GraphInstance JSON")->check(CLI::ExistingFile);
  oracle_cmd->add_option("--b", ob, "|B| (B = {0..b-1} unless --B is given)");
  oracle_cmd->add_option("--B", oset, "Vertex set B, comma separated");
  oracle_cmd->add_option("--x", ox, "Subset size x");
  oracle_cmd->add_option("--y", oy, "Subset size y");
  oracle_cmd->add_option("--v1", ov1, "|V1|");
  oracle_cmd->add_option("--N", onset, "Set N ⊆ V1, comma separated");
  oracle_cmd->add_option("--n", on, "Vertex count for sweeps");
  oracle_cmd->callback([&] {
    action = [&] {
      auto ratio = [](const oracle::Ratio& r) { return json{{"num", r.num}, {"den", r.den}, {"value", r.value()}}; };
      auto sweep = [&](const oracle::SweepResult& s) {
        json j = {{"lemma", lemma}, {"cases", s.cases}, {"failures", s.failures}, {"ok", s.ok()}};
        if (!s.ok()) j["first_failure"] = s.first_failure;
        status = s.ok() ? kOk : kCheckFailed;
        return j;
      };
      if (lemma == "delta" || lemma == "edge") {
        if (ograph.empty()) throw UsageError("--graph is required for '" + lemma + "'");
        auto g = io::instance_from_json(io::read_file(ograph), ograph + "#");
        if (ox < 1 || ox > g.n()) throw UsageError("--x must be in [1, n]");
        if (lemma == "delta") {
          std::uint64_t b = 0;
          if (!oset.empty())
            b = vertex_mask(parse_int_list(oset, "--B"), g.n(), "--B");
          else if (ob >= 1 && ob <= g.n())
            b = oracle::full_mask(ob);
          else
            throw UsageError("give --B or --b in [1, n]");
          const int bsz = std::popcount(b);
          auto r = oracle::delta_expectation(g, b, ox);
          const bool ok = r.at_most(static_cast<std::uint64_t>(bsz * bsz), static_cast<std::uint64_t>(ox));
          out << io::dump({{"lemma", "delta"}, {"expectation", ratio(r)}, {"bound", static_cast<double>(bsz * bsz) / ox},
                           {"b", bsz}, {"x", ox}, {"ok", ok}});
          status = ok ? kOk : kCheckFailed;
        } else {
          if (oy < 1 || oy > g.n()) throw UsageError("--y must be in [1, n]");
          auto r = oracle::edge_expectation(g, ox, oy);
          const auto n = static_cast<std::uint64_t>(g.n());
          const auto target = 2 * static_cast<std::uint64_t>(ox * oy) * static_cast<std::uint64_t>(g.m());
          const bool ok = r.equals(target, n * n);
          out << io::dump({{"lemma", "edge"}, {"expectation", ratio(r)},
                           {"formula", static_cast<double>(target) / static_cast<double>(n * n)}, {"ok", ok}});
          status = ok ? kOk : kCheckFailed;
        }
      } else if (lemma == "ninter" || lemma == "ninter-sq") {
        if (ov1 < 1 || ov1 > 12) throw UsageError("--v1 must be in [1, 12]");
        if (ox < 0 || ox > ov1) throw UsageError("--x must be in [0, v1]");
        const std::uint64_t nset = vertex_mask(parse_int_list(onset, "--N"), ov1, "--N");
        const auto nn = static_cast<std::uint64_t>(std::popcount(nset));
        const auto xx = static_cast<std::uint64_t>(ox), vv = static_cast<std::uint64_t>(ov1);
        if (lemma == "ninter") {
          auto r = oracle::ninter(ov1, nset, ox);
          const bool ok = r.equals(xx * nn, vv);
          out << io::dump({{"lemma", lemma}, {"expectation", ratio(r)}, {"formula", static_cast<double>(xx * nn) / ov1},
                           {"ok", ok}});
          status = ok ? kOk : kCheckFailed;
        } else {
          auto r = oracle::ninter_sq(ov1, nset, ox);
          const bool applies = xx * nn >= vv;
          const bool ok = !applies || r.at_most(2 * xx * nn * xx * nn, vv * vv);
          out << io::dump({{"lemma", lemma}, {"expectation", ratio(r)},
                           {"bound", 2.0 * std::pow(static_cast<double>(xx * nn) / ov1, 2)}, {"precondition", applies},
                           {"ok", ok}});
          status = ok ? kOk : kCheckFailed;
        }
      } else if (lemma == "sweep-delta") {
        if (on < 1 || on > 6) throw UsageError("--n must be in [1, 6]");
        out << io::dump(sweep(oracle::sweep_delta_bound(on)));
      } else if (lemma == "sweep-edge") {
        if (on < 1 || on > 6) throw UsageError("--n must be in [1, 6]");
        out << io::dump(sweep(oracle::sweep_edge_expectation(on, 3)));
      } else {
        if (ov1 < 1 || ov1 > 12) throw UsageError("--v1 must be in [1, 12]");
        out << io::dump(sweep(lemma == "sweep-ninter" ? oracle::sweep_ninter(ov1) : oracle::sweep_ninter_sq(ov1)));
      }
    };
  });

  // costmodel
  std::string variant = "dense", mlaw = "n^2";
  double cn = 1024, cm = -1, cd2 = -1, cx = 0, cat = 0, cb = 0, lo = 10, hi = 24;
  int points = 15;
  bool fit = false, optimize = false, csv = false;
  auto* cost_cmd = app.add_subcommand("costmodel", "Evaluate, optimize or fit the cost formulas");
  cost_cmd->add_option("--variant", variant, "dense | sparse | sparsenew")
      ->check(CLI::IsMember({"dense", "sparse", "sparsenew"}));
  cost_cmd->add_option("--n", cn, "Vertices");
  cost_cmd->add_option("--m", cm, "Edges (default from --m-law)");
  cost_cmd->add_option("--d2", cd2, "Root mean square degree (default 2m/n)");
  cost_cmd->add_option("--x", cx, "Tunable x");
  cost_cmd->add_option("--a", cat, "Tunable a");
  cost_cmd->add_option("--b", cb, "Tunable b");
  cost_cmd->add_option("--m-law", mlaw, "m as a power of n, e.g. n^1.5");
  cost_cmd->add_flag("--optimize", optimize, "Optimize the tunables");
  cost_cmd->add_flag("--fit", fit, "Fit the exponent of the optimized cost");
  cost_cmd->add_option("--lo", lo, "Fit range start, log2 n");
  cost_cmd->add_option("--hi", hi, "Fit range end, log2 n");
  cost_cmd->add_option("--points", points, "Fit points");
  cost_cmd->add_flag("--csv", csv, "CSV rows instead of JSON for --fit");
  cost_cmd->callback([&] {
    action = [&] {
      const auto v = triangle::parse_variant(variant);
      double c = 0.0;
      try {
        c = cost::parse_m_law(mlaw);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      if (fit) {
        if (points < 3) throw UsageError("--points must be at least 3");
        auto r = cost::fit_exponent(v, c, lo, hi, points);
        if (csv) {
          out << "n,m,d2,cost,corrected,x,a,b\n";
          out.precision(17);
          for (const auto& p : r.points)
            out << p.n << ',' << p.m << ',' << p.d2 << ',' << p.opt.cost << ',' << p.corrected << ',' << p.opt.params.x
                << ',' << p.opt.params.a << ',' << p.opt.params.b << '\n';
          return;
        }
        json pts = json::array();
        for (const auto& p : r.points)
          pts.push_back({{"n", p.n}, {"m", p.m}, {"d2", p.d2}, {"corrected", p.corrected}, {"opt", optimum_json(p.opt)}});
        json j = {{"variant", variant}, {"m_law", mlaw}, {"exponent", r.exponent}, {"residual", r.residual},
                  {"n_range", {r.n_min, r.n_max}}, {"log_corrected", r.log_corrected}, {"log_factor", r.log_factor},
                  {"points", pts}};
        if (r.power_exponent) j["power_exponent"] = *r.power_exponent;
        if (r.d2_exponent) j["d2_exponent"] = *r.d2_exponent;
        if (!r.dominant.empty()) j["dominant"] = r.dominant;
        out << io::dump(j);
        return;
      }
      if (cn <= 1) throw UsageError("--n must exceed 1");
      const double m = cm >= 0 ? cm : std::pow(cn, c);
      const double d2 = cd2 >= 0 ? cd2 : 2.0 * m / cn;
      json j = {{"variant", variant}, {"n", cn}, {"m", m}, {"d2", d2}};
      if (optimize || (cx == 0 && cat == 0 && cb == 0)) {
        auto o = cost::optimize_params(v, cn, m, d2);
        j["optimum"] = optimum_json(o);
        j["warnings"] = cost::cost_warnings(v, cn, m, o.params.b);
      } else {
        if (cb <= 0 || (v != triangle::Variant::SparseNew && (cx <= 0 || cat <= 0)))
          throw UsageError("give positive --x, --a, --b (sparsenew: --b)");
        j["params"] = {{"x", cx}, {"a", cat}, {"b", cb}};
        j["cost"] = cost::eval_cost(v, cn, m, d2, cx, cat, cb);
        j["warnings"] = cost::cost_warnings(v, cn, m, cb);
      }
      out << io::dump(j);
    };
  });

  // corpus
  corpus::Options copt;
  std::string cdir = "corpus";
  auto* corpus_cmd = app.add_subcommand("corpus", "Generate the reproducible graph corpus");
  corpus_cmd->add_option("--seed", copt.seed, "Generator seed");
  corpus_cmd->add_option("--out,-o", cdir, "Output directory");
  corpus_cmd->add_option("--samples", copt.samples, "G(n,p) samples per (n, p)");
  corpus_cmd->add_option("--p", copt.probabilities, "Edge probabilities");
  corpus_cmd->add_option("--max-n", copt.sample_max_n, "Largest sampled n");
  corpus_cmd->add_option("--exhaustive-n", copt.exhaustive_max_n, "Largest exhaustive n");
  corpus_cmd->callback([&] {
    action = [&] {
      if (copt.samples < 0) throw UsageError("--samples must be nonnegative");
      if (copt.exhaustive_max_n < 1 || copt.exhaustive_max_n > 5) throw UsageError("--exhaustive-n must be in [1, 5]");
      if (copt.sample_max_n > 11) throw UsageError("--max-n must be at most 11");
      for (double p : copt.probabilities)
        if (p < 0 || p > 1) throw UsageError("--p values must be in [0, 1]");
      const auto count = corpus::write(cdir, copt);
      out << io::dump({{"directory", cdir}, {"instances", count}, {"seed", copt.seed}, {"generator", corpus::kGenerator},
                       {"threads", thread_count()}});
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    out << io::dump(error_json("usage", e.what()));
    return kUsage;
  }
  try {
    if (action) action();
  } catch (const UsageError& e) {
    out << io::dump(error_json("usage", e.what()));
    return kUsage;
  } catch (const io::FormatError& e) {
    out << io::dump(error_json("input", e.what(), e.where()));
    return kUsage;
  } catch (const Error& e) {
    out << io::dump(error_json("check", e.what()));
    return kCheckFailed;
  } catch (const std::exception& e) {
    out << io::dump(error_json("internal", e.what()));
    return kCheckFailed;
  }
  return status;
}

}  // namespace lg::cli
