#pragma once

// Generators and brute-force oracles shared by the unit and acceptance
// suites. Nothing here calls into the code under test beyond plain data
// structures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "sbtk/graph.hpp"

#ifndef SBTK_FIXTURE_DIR
#define SBTK_FIXTURE_DIR "tests/fixtures"
#endif

namespace testing {

inline std::string fixture(const std::string& name) { return std::string(SBTK_FIXTURE_DIR) + "/" + name; }

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

// Random graph on up to `max_n` vertices. Integer weights from a small range
// produce plenty of ties; `distinct` draws continuous weights instead.
inline sbtk::WeightedGraph random_graph(std::mt19937_64& rng, std::size_t max_n, bool distinct = false) {
  sbtk::WeightedGraph g;
  const std::size_t n = 1 + below(rng, max_n);
  const double p = 0.2 + 0.7 * uniform01(rng);
  for (sbtk::VertexId v = 0; v < n; ++v) g.add_vertex(v);
  for (sbtk::VertexId u = 0; u < n; ++u) {
    for (sbtk::VertexId v = u + 1; v < n; ++v) {
      if (uniform01(rng) >= p) continue;
      const double w = distinct ? 0.5 + 9.5 * uniform01(rng) : static_cast<double>(1 + below(rng, 4));
      g.add_edge(u, v, w);
    }
  }
  return g;
}

inline bool is_clique(const sbtk::WeightedGraph& g, const std::vector<sbtk::VertexId>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (!g.weight(vs[i], vs[j])) return false;
    }
  }
  return true;
}

// Every subset of the vertex set, as sorted id lists.
inline std::vector<std::vector<sbtk::VertexId>> all_subsets(const sbtk::WeightedGraph& g) {
  const std::vector<sbtk::VertexId> vs(g.vertices().begin(), g.vertices().end());
  std::vector<std::vector<sbtk::VertexId>> out;
  for (std::uint32_t mask = 1; mask < (1u << vs.size()); ++mask) {
    std::vector<sbtk::VertexId> s;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (mask & (1u << i)) s.push_back(vs[i]);
    }
    out.push_back(s);
  }
  return out;
}

inline std::vector<std::vector<sbtk::VertexId>> brute_maximal_cliques(const sbtk::WeightedGraph& g) {
  std::vector<std::vector<sbtk::VertexId>> cliques;
  for (const auto& s : all_subsets(g)) {
    if (is_clique(g, s)) cliques.push_back(s);
  }
  std::vector<std::vector<sbtk::VertexId>> out;
  for (const auto& c : cliques) {
    bool maximal = true;
    for (sbtk::VertexId v : g.vertices()) {
      if (std::find(c.begin(), c.end(), v) != c.end()) continue;
      auto bigger = c;
      bigger.push_back(v);
      std::sort(bigger.begin(), bigger.end());
      if (is_clique(g, bigger)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Filter index straight from the definition: rank of the weakest edge for a
// simplex with edges, earliest incident edge for a vertex, 0 when isolated.
inline std::map<std::vector<sbtk::VertexId>, std::uint32_t> brute_filtration(const sbtk::WeightedGraph& g,
                                                                             bool descending, int max_dim) {
  std::set<double> distinct;
  for (const auto& e : g.edges()) distinct.insert(e.weight);
  std::vector<double> ladder(distinct.begin(), distinct.end());
  if (descending) std::reverse(ladder.begin(), ladder.end());
  auto rank = [&](double w) {
    return static_cast<std::uint32_t>(std::find(ladder.begin(), ladder.end(), w) - ladder.begin());
  };
  std::map<std::vector<sbtk::VertexId>, std::uint32_t> out;
  for (const auto& s : all_subsets(g)) {
    if (static_cast<int>(s.size()) - 1 > max_dim || !is_clique(g, s)) continue;
    std::uint32_t f = 0;
    if (s.size() == 1) {
      std::uint32_t best = UINT32_MAX;
      for (const auto& e : g.edges()) {
        if (e.u == s[0] || e.v == s[0]) best = std::min(best, rank(e.weight));
      }
      f = best == UINT32_MAX ? 0 : best;
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) f = std::max(f, rank(*g.weight(s[i], s[j])));
      }
    }
    out[s] = f;
  }
  return out;
}

// Shannon entropy computed the long way, for cross-checking.
inline double naive_entropy(const std::vector<double>& lengths) {
  double total = 0.0;
  for (double l : lengths) total += l;
  double h = 0.0;
  for (double l : lengths) h -= (l / total) * std::log(l / total);
  return h;
}

// Fresh empty directory, unique per process.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sbtk_test_" + std::to_string(::getpid())) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Relative path -> file content for every regular file below `root`.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[std::filesystem::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

// Columns of a matrix CSV (`action,source,target,s1,...`) in file order.
inline std::vector<std::vector<std::uint8_t>> read_columns(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<std::uint8_t>> rows;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::uint8_t> row;
    for (int field = 0; std::getline(ss, cell, ','); ++field) {
      if (field >= 3) row.push_back(static_cast<std::uint8_t>(std::stoi(cell)));
    }
    rows.push_back(row);
  }
  std::vector<std::vector<std::uint8_t>> cols(rows.empty() ? 0 : rows[0].size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (const auto& r : rows) cols[k].push_back(r[k]);
  }
  return cols;
}

}  // namespace testing
