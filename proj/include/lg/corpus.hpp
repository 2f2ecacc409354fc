#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lg/json_io.hpp"
#include "lg/triangle.hpp"

namespace lg::corpus {

inline constexpr const char* kGenerator = "std::mt19937_64";

struct Entry {
  std::string name;
  std::string family;  // "exhaustive" or "gnp"
  double p = 0.0;
  triangle::GraphInstance graph;
};

struct Options {
  std::uint64_t seed = 0;
  int exhaustive_max_n = 4;
  int sample_min_n = 5;
  int sample_max_n = 10;
  std::vector<double> probabilities{0.3, 0.5};
  int samples = 10;
};

/// Uniform double in [0,1) from the top 53 bits of one draw, so the stream does not depend on
/// the standard library's distribution implementations.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// G(n,p): each pair u < v in lexicographic order is an edge with probability p.
inline triangle::GraphInstance sample_gnp(int n, double p, std::mt19937_64& rng) {
  require(p >= 0.0 && p <= 1.0, "edge probability must be in [0, 1]");
  Input z = 0;
  for (int i = 0; i < triangle::edge_bits(n); ++i)
    if (unit(rng) < p) z |= Input{1} << i;
  return {n, z};
}

inline std::vector<triangle::GraphInstance> generate_gnp(int n, double p, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<triangle::GraphInstance> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_gnp(n, p, rng));
  return out;
}

inline std::string pad(std::uint64_t v, int width) {
  auto s = std::to_string(v);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

/// All graphs on 1..exhaustive_max_n vertices, then G(n,p) samples from one generator stream
/// consumed in the order n ascending, p as listed, sample index ascending.
inline std::vector<Entry> generate(const Options& opt) {
  require(opt.exhaustive_max_n <= 6, "exhaustive slice capped at n = 6");
  require(opt.sample_max_n <= 11, "samples capped at n = 11");
  std::vector<Entry> out;
  for (int n = 1; n <= opt.exhaustive_max_n; ++n)
    for (Input z = 0; z < (Input{1} << triangle::edge_bits(n)); ++z)
      out.push_back({"n" + std::to_string(n) + "-all-" + pad(z, 5), "exhaustive", 0.0, {n, z}});
  std::mt19937_64 rng(opt.seed);
  for (int n = opt.sample_min_n; n <= opt.sample_max_n; ++n)
    for (double p : opt.probabilities) {
      const auto tag = pad(static_cast<std::uint64_t>(std::lround(p * 100)), 3);
      for (int i = 0; i < opt.samples; ++i)
        out.push_back({"n" + std::to_string(n) + "-p" + tag + "-" + pad(static_cast<std::uint64_t>(i), 4), "gnp", p,
                       sample_gnp(n, p, rng)});
    }
  return out;
}

inline io::json manifest(const Options& opt, const std::vector<Entry>& entries) {
  io::json items = io::json::array();
  for (const auto& e : entries) {
    io::json it = {{"name", e.name}, {"family", e.family}, {"n", e.graph.n()}, {"m", e.graph.m()},
                   {"d2", e.graph.d2()}, {"triangle", e.graph.first_triangle().has_value()}};
    if (e.family == "gnp") it["p"] = e.p;
    items.push_back(std::move(it));
  }
  return {{"generator", kGenerator},
          {"seed", opt.seed},
          {"exhaustive_max_n", opt.exhaustive_max_n},
          {"sample_n", {opt.sample_min_n, opt.sample_max_n}},
          {"probabilities", opt.probabilities},
          {"samples", opt.samples},
          {"instances", items}};
}

/// Writes graphs/<name>.json, functions/triangle-<n>.json for 3 ≤ n ≤ min(4, exhaustive_max_n) and
/// manifest.json under `dir`.
inline std::size_t write(const std::filesystem::path& dir, const Options& opt) {
  const auto entries = generate(opt);
  std::filesystem::create_directories(dir / "graphs");
  std::filesystem::create_directories(dir / "functions");
  for (const auto& e : entries) io::write_file((dir / "graphs" / (e.name + ".json")).string(), io::to_json(e.graph));
  for (int n = 3; n <= std::min(4, opt.exhaustive_max_n); ++n)
    io::write_file((dir / "functions" / ("triangle-" + std::to_string(n) + ".json")).string(),
                   io::to_json(triangle::triangle_function(n)));
  io::write_file((dir / "manifest.json").string(), manifest(opt, entries));
  return entries.size();
}

}  // namespace lg::corpus
