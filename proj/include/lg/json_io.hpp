#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "lg/adversary.hpp"
#include "lg/boolean_function.hpp"
#include "lg/complexity.hpp"
#include "lg/learning_graph.hpp"
#include "lg/triangle.hpp"
#include "lg/validate.hpp"

namespace lg::io {

using nlohmann::json;

/// Malformed input; `where` is a JSON-pointer-like path into the document.
class FormatError : public Error {
 public:
  FormatError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw FormatError(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(at, "missing field '" + key + "'");
  return *it;
}

template <class T>
T get(const json& j, const std::string& at) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw FormatError(at, e.what());
  }
}

template <class T>
T get_field(const json& j, const std::string& key, const std::string& at) {
  return get<T>(field(j, key, at), at + "/" + key);
}

inline json index_list(IndexSet s) { return s.to_vector(); }

inline IndexSet read_indices(const json& j, const std::string& at) {
  if (!j.is_array()) throw FormatError(at, "expected an array of indices");
  IndexSet s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int v = get<int>(j[i], at + "/" + std::to_string(i));
    if (v < 0 || v >= kMaxBits) throw FormatError(at + "/" + std::to_string(i), "index out of range");
    s.insert(v);
  }
  return s;
}

inline Input read_bits(const std::string& s, const std::string& at) {
  try {
    return parse_bitstring(s);
  } catch (const Error& e) {
    throw FormatError(at, e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Weight rules.

inline json to_json(const WeightRule& r) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, rule::Constant>) {
          return {{"rule", "constant"}, {"value", n.value}};
        } else if constexpr (std::is_same_v<T, rule::DenseLoad>) {
          return {{"rule", "dense-load"}, {"size", n.size}};
        } else if constexpr (std::is_same_v<T, rule::SparseLoad>) {
          return {{"rule", "sparse-load"}, {"index", n.index}, {"prefix", detail::index_list(n.prefix)},
                  {"size", n.size}, {"side", n.side}};
        } else if constexpr (std::is_same_v<T, rule::Table>) {
          json entries = json::object();
          for (const auto& [key, v] : n.entries) entries[PartialAssignment{n.support, key}.key()] = v;
          return {{"rule", "table"}, {"support", detail::index_list(n.support)}, {"entries", entries},
                  {"fallback", to_json(*n.fallback)}};
        } else {
          json fs = json::array();
          for (const auto& f : n.factors) fs.push_back(to_json(f));
          return {{"rule", "product"}, {"factors", fs}};
        }
      },
      r.node());
}

inline WeightRule rule_from_json(const json& j, const std::string& at = "") {
  const auto kind = detail::get_field<std::string>(j, "rule", at);
  try {
    if (kind == "constant") return WeightRule::constant(detail::get_field<double>(j, "value", at));
    if (kind == "dense-load") return WeightRule::dense_load(detail::get_field<int>(j, "size", at));
    if (kind == "sparse-load")
      return WeightRule::sparse_load(detail::get_field<int>(j, "index", at),
                                     detail::read_indices(detail::field(j, "prefix", at), at + "/prefix"),
                                     detail::get_field<int>(j, "size", at), detail::get_field<int>(j, "side", at));
    if (kind == "table") {
      const IndexSet support = detail::read_indices(detail::field(j, "support", at), at + "/support");
      std::map<std::uint64_t, double> entries;
      const auto& ej = detail::field(j, "entries", at);
      if (!ej.is_object()) throw FormatError(at + "/entries", "expected an object");
      for (const auto& [key, v] : ej.items()) {
        const std::string here = at + "/entries/" + key;
        PartialAssignment a;
        try {
          a = PartialAssignment::parse(key);
        } catch (const Error& e) {
          throw FormatError(here, e.what());
        }
        if (a.indices != support) throw FormatError(here, "entry key must assign exactly the support");
        entries[a.bits] = detail::get<double>(v, here);
      }
      return WeightRule::table(support, std::move(entries), rule_from_json(detail::field(j, "fallback", at), at + "/fallback"));
    }
    if (kind == "product") {
      const auto& fj = detail::field(j, "factors", at);
      if (!fj.is_array()) throw FormatError(at + "/factors", "expected an array");
      std::vector<WeightRule> fs;
      for (std::size_t i = 0; i < fj.size(); ++i) fs.push_back(rule_from_json(fj[i], at + "/factors/" + std::to_string(i)));
      return WeightRule::product(std::move(fs));
    }
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(at, e.what());
  }
  throw FormatError(at + "/rule", "unknown rule '" + kind + "'");
}

// ---------------------------------------------------------------------------------------------
// Learning graphs.

inline json flow_to_json(const SparseFlow& flow) {
  json out = json::object();
  for (const auto& f : flow) out[std::to_string(f.edge)] = f.value;
  return out;
}

inline json to_json(const LearningGraph& g) {
  json vs = json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v) vs.push_back({{"id", v}, {"label", detail::index_list(g.label(v))}});
  json es = json::array();
  for (const auto& e : g.edges()) {
    json ej = {{"from", e.from}, {"to", e.to}};
    if (e.is_ordinary()) {
      ej["loads"] = e.index;
      ej["w0"] = to_json(e.w0);
      ej["w1"] = to_json(e.w1);
    } else if (e.is_super()) {
      ej["loads"] = {{"super", to_json(*e.inner)}, {"factor", to_json(e.factor)}};
    } else {
      ej["loads"] = nullptr;
    }
    if (!e.stage.empty()) ej["stage"] = e.stage;
    es.push_back(std::move(ej));
  }
  json flows = json::object();
  for (const auto& [y, flow] : g.flows()) flows[to_bitstring(y, g.n_bits())] = flow_to_json(flow);
  json out = {{"n", g.n_bits()}, {"root", g.root()}, {"vertices", vs}, {"edges", es}, {"flows", flows}};
  if (g.default_flow()) out["default_flow"] = flow_to_json(*g.default_flow());
  if (!g.stages().empty()) {
    json st = json::array();
    for (const auto& s : g.stages())
      st.push_back({{"name", s.name}, {"origin", s.origin}, {"n_total", s.n_total}, {"n_used", s.n_used},
                    {"speciality", s.speciality}});
    out["stages"] = st;
  }
  return out;
}

inline LearningGraph graph_from_json(const json& j, const std::string& at = "") {
  const int n = detail::get_field<int>(j, "n", at);
  if (n < 0 || n > kMaxBits) throw FormatError(at + "/n", "bit count must be in [0, 64]");
  LearningGraph::Builder b(n);
  const auto& vs = detail::field(j, "vertices", at);
  if (!vs.is_array()) throw FormatError(at + "/vertices", "expected an array");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string here = at + "/vertices/" + std::to_string(i);
    if (detail::get_field<std::size_t>(vs[i], "id", here) != i) throw FormatError(here + "/id", "vertex ids must be 0, 1, 2, ...");
    b.add_vertex(detail::read_indices(detail::field(vs[i], "label", here), here + "/label"));
  }
  try {
    b.set_root(j.contains("root") ? detail::get_field<VertexId>(j, "root", at) : 0);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(at + "/root", e.what());
  }
  const auto& es = detail::field(j, "edges", at);
  if (!es.is_array()) throw FormatError(at + "/edges", "expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string here = at + "/edges/" + std::to_string(i);
    const auto& ej = es[i];
    const auto from = detail::get_field<VertexId>(ej, "from", here);
    const auto to = detail::get_field<VertexId>(ej, "to", here);
    const std::string stage = ej.contains("stage") ? detail::get_field<std::string>(ej, "stage", here) : "";
    const auto& loads = detail::field(ej, "loads", here);
    try {
      if (loads.is_null()) {
        b.add_empty(from, to, stage);
      } else if (loads.is_number_integer()) {
        b.add_ordinary(from, to, loads.get<int>(), rule_from_json(detail::field(ej, "w0", here), here + "/w0"),
                       rule_from_json(detail::field(ej, "w1", here), here + "/w1"), stage);
      } else if (loads.is_object()) {
        auto inner = std::make_shared<const LearningGraph>(
            graph_from_json(detail::field(loads, "super", here + "/loads"), here + "/loads/super"));
        WeightRule factor = loads.contains("factor") ? rule_from_json(loads["factor"], here + "/loads/factor")
                                                     : WeightRule::constant(1.0);
        b.add_super(from, to, std::move(inner), std::move(factor), stage);
      } else {
        throw FormatError(here + "/loads", "expected an index, null or {\"super\": ...}");
      }
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(here, e.what());
    }
  }
  auto read_flow = [&](const json& fj, const std::string& here, auto&& add) {
    if (!fj.is_object()) throw FormatError(here, "expected an object of edge ids");
    for (const auto& [key, v] : fj.items()) {
      EdgeId e = 0;
      try {
        std::size_t used = 0;
        e = static_cast<EdgeId>(std::stoul(key, &used));
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw FormatError(here + "/" + key, "flow key must be an edge index");
      }
      try {
        add(e, detail::get<double>(v, here + "/" + key));
      } catch (const FormatError&) {
        throw;
      } catch (const Error& ex) {
        throw FormatError(here + "/" + key, ex.what());
      }
    }
  };
  if (j.contains("flows")) {
    const auto& fl = j["flows"];
    if (!fl.is_object()) throw FormatError(at + "/flows", "expected an object keyed by input bitstrings");
    for (const auto& [key, fj] : fl.items()) {
      const std::string here = at + "/flows/" + key;
      if (key.size() != static_cast<std::size_t>(n)) throw FormatError(here, "input key must have n characters");
      const Input y = detail::read_bits(key, here);
      read_flow(fj, here, [&](EdgeId e, double v) { b.add_flow(y, e, v); });
    }
  }
  if (j.contains("default_flow"))
    read_flow(j["default_flow"], at + "/default_flow", [&](EdgeId e, double v) {
      b.add_default_flow(e, v);
    });
  if (j.contains("default_flow") && j["default_flow"].empty() && b.edge_count() > 0) b.add_default_flow(0, 0.0);
  if (j.contains("stages")) {
    const auto& st = j["stages"];
    for (std::size_t i = 0; i < st.size(); ++i) {
      const std::string here = at + "/stages/" + std::to_string(i);
      b.add_stage_info({detail::get_field<std::string>(st[i], "name", here), detail::get_field<std::string>(st[i], "origin", here),
                        detail::get_field<std::uint64_t>(st[i], "n_total", here),
                        detail::get_field<std::uint64_t>(st[i], "n_used", here),
                        detail::get_field<double>(st[i], "speciality", here)});
    }
  }
  return std::move(b).build();
}

// ---------------------------------------------------------------------------------------------
// Truth tables.

inline json to_json(const BooleanFunction& f) {
  json dom = json::array();
  std::string values;
  const auto& d = *f.domain();
  for (std::size_t i = 0; i < d.size(); ++i) {
    dom.push_back(to_bitstring(d[i], f.n_bits()));
    values.push_back(f.value_at(i) ? '1' : '0');
  }
  json certs = json::object();
  for (const auto& [y, c] : f.certificates()) certs[to_bitstring(y, f.n_bits())] = detail::index_list(c);
  return {{"n", f.n_bits()}, {"domain", dom}, {"values", values}, {"certs", certs}};
}

/// "domain" may be the string "full" for {0,1}^n; otherwise values follow the listed order.
inline BooleanFunction function_from_json(const json& j, const std::string& at = "") {
  const int n = detail::get_field<int>(j, "n", at);
  if (n < 0 || n > kMaxBits) throw FormatError(at + "/n", "bit count must be in [0, 64]");
  const auto& dj = detail::field(j, "domain", at);
  std::vector<Input> inputs;
  DomainPtr dom;
  try {
    if (dj.is_string() && dj.get<std::string>() == "full") {
      dom = Domain::full(n);
      inputs = dom->inputs();
    } else {
      if (!dj.is_array()) throw FormatError(at + "/domain", "expected an array of bitstrings or \"full\"");
      for (std::size_t i = 0; i < dj.size(); ++i) {
        const std::string here = at + "/domain/" + std::to_string(i);
        const auto s = detail::get<std::string>(dj[i], here);
        if (s.size() != static_cast<std::size_t>(n)) throw FormatError(here, "bitstring must have n characters");
        inputs.push_back(detail::read_bits(s, here));
      }
      dom = std::make_shared<const Domain>(n, inputs);
    }
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(at + "/domain", e.what());
  }
  const auto vs = detail::get_field<std::string>(j, "values", at);
  if (vs.size() != inputs.size()) throw FormatError(at + "/values", "one value per domain input expected");
  std::vector<std::uint8_t> values(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (vs[i] != '0' && vs[i] != '1') throw FormatError(at + "/values", "values must be a 0/1 string");
    values[*dom->position(inputs[i])] = vs[i] == '1';
  }
  std::map<Input, IndexSet> certs;
  if (j.contains("certs")) {
    if (!j["certs"].is_object()) throw FormatError(at + "/certs", "expected an object keyed by input bitstrings");
    for (const auto& [key, cj] : j["certs"].items())
      certs[detail::read_bits(key, at + "/certs/" + key)] = detail::read_indices(cj, at + "/certs/" + key);
  }
  try {
    return BooleanFunction(dom, std::move(values), std::move(certs));
  } catch (const Error& e) {
    throw FormatError(at + "/certs", e.what());
  }
}

// ---------------------------------------------------------------------------------------------
// Graph instances.

inline json to_json(const triangle::GraphInstance& g) {
  json es = json::array();
  for (auto [u, v] : g.edges()) es.push_back({u, v});
  return {{"n", g.n()}, {"edges", es}};
}

inline triangle::GraphInstance instance_from_json(const json& j, const std::string& at = "") {
  const int n = detail::get_field<int>(j, "n", at);
  if (n < 1 || n > 11) throw FormatError(at + "/n", "vertex count must be in [1, 11]");
  const auto& es = detail::field(j, "edges", at);
  if (!es.is_array()) throw FormatError(at + "/edges", "expected an array of [u, v] pairs");
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string here = at + "/edges/" + std::to_string(i);
    const auto p = detail::get<std::vector<int>>(es[i], here);
    if (p.size() != 2 || p[0] == p[1] || p[0] < 0 || p[1] < 0 || p[0] >= n || p[1] >= n)
      throw FormatError(here, "edge must be two distinct vertices in [0, n)");
    edges.emplace_back(p[0], p[1]);
  }
  return triangle::GraphInstance::from_edges(n, edges);
}

// ---------------------------------------------------------------------------------------------
// Reports.

inline json per_input(const std::map<Input, double>& m, int n) {
  json out = json::object();
  for (const auto& [z, v] : m) out[to_bitstring(z, n)] = v;
  return out;
}

inline json stage_json(const StageComplexity& s, int n) {
  json out = {{"name", s.name},  {"c0_max", s.c0_max}, {"c1_max", s.c1_max}, {"c", s.c},
              {"edges", s.edges.size()}, {"inflow_error", s.inflow_error},
              {"per_input", {{"c0", per_input(s.c0, n)}, {"c1", per_input(s.c1, n)}}}};
  if (s.provenance)
    out["provenance"] = {{"origin", s.provenance->origin},
                         {"n_total", s.provenance->n_total},
                         {"n_used", s.provenance->n_used},
                         {"speciality", s.provenance->speciality}};
  return out;
}

inline json to_json(const ComplexityReport& r, int n) {
  json st = json::array();
  for (const auto& s : r.stages) st.push_back(stage_json(s, n));
  return {{"stages", st}, {"total", stage_json(r.total, n)}};
}

inline json to_json(const ValidationReport& r, int n) {
  json vs = json::array();
  for (const auto& v : r.violations) {
    json vj = {{"kind", v.kind}, {"message", v.message}, {"expanded", v.expanded}};
    if (v.edge) vj["edge"] = *v.edge;
    if (v.input) vj["input"] = to_bitstring(*v.input, n);
    if (v.assignment) vj["assignment"] = *v.assignment;
    vs.push_back(std::move(vj));
  }
  return {{"ok", r.ok()}, {"violations", vs}, {"suppressed", r.suppressed}};
}

inline json to_json(const WitnessReport& r, int n) {
  json out = {{"ok", r.ok()},
              {"psd", {{"pass", r.psd}, {"min_eigenvalue", r.min_eigenvalue}, {"index", r.min_eigen_index}}},
              {"constraints", {{"pass", r.constraints}, {"worst_error", r.worst_constraint_error}}},
              {"objective", {{"pass", r.objective_ok}, {"value", r.objective}}}};
  if (r.worst_pair)
    out["constraints"]["worst_pair"] = {to_bitstring(r.worst_pair->first, n), to_bitstring(r.worst_pair->second, n)};
  if (r.expected_objective) out["objective"]["expected"] = *r.expected_objective;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Files.

/// Canonical text: sorted keys, two-space indent, shortest round-trip doubles, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw FormatError(path, std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path, "cannot write file");
  out << dump(j);
}

}  // namespace lg::io
