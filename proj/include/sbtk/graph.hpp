#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sbtk {

using VertexId = std::uint32_t;
using Tick = std::uint64_t;

struct Edge {
  VertexId u;  // u < v
  VertexId v;
  double weight;

  bool operator==(const Edge&) const = default;
};

// Undirected simple graph with strictly positive finite edge weights.
//
// Built incrementally and then treated as an immutable value. Every mutator
// validates the invariants (no self-loops, one edge per unordered pair,
// positive finite weights) and throws the matching DataError.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  void add_vertex(VertexId v);
  void add_edge(VertexId u, VertexId v, double weight);
  void set_name(VertexId v, std::string name);

  const std::set<VertexId>& vertices() const { return vertices_; }
  std::vector<Edge> edges() const;
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
  std::optional<double> weight(VertexId u, VertexId v) const;

  // Sidecar labels for display (e.g. "Ab256"); ids without a label print as numbers.
  const std::map<VertexId, std::string>& names() const { return names_; }
  std::string label(VertexId v) const;

  // Sorted neighbour lists indexed by position in vertices().
  std::vector<std::vector<VertexId>> adjacency() const;

  bool operator==(const WeightedGraph& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_;
  }

 private:
  std::set<VertexId> vertices_;
  std::map<std::pair<VertexId, VertexId>, double> edges_;
  std::map<VertexId, std::string> names_;
};

struct Observation {
  Tick tick;
  WeightedGraph graph;
};

// Ordered observations; ticks strictly increasing.
class ObservationSeries {
 public:
  ObservationSeries() = default;

  void append(Tick tick, WeightedGraph graph);
  const std::vector<Observation>& observations() const { return observations_; }
  std::size_t size() const { return observations_.size(); }
  bool empty() const { return observations_.empty(); }

 private:
  std::vector<Observation> observations_;
};

// Edge-list CSV: `u,v,weight` per line, `#` comments and blank lines
// ignored. A line holding a single id declares an isolated vertex.
WeightedGraph parse_edge_list(const std::string& text, const std::string& origin = "<string>");
WeightedGraph load_edge_list(const std::string& path);
std::string format_edge_list(const WeightedGraph& g);
void save_edge_list(const WeightedGraph& g, const std::string& path);

// Edge (i, j, m[i][j]) for every i < j with m[i][j] > threshold. Vertices
// 0..n-1 are always present. Symmetry is checked to 1e-9 absolute.
WeightedGraph from_symmetric_matrix(const std::vector<std::vector<double>>& m, double threshold);

inline constexpr double kSymmetryTolerance = 1e-9;

// Series I/O. A directory holds `obs_<tick>.csv` files plus an optional
// `names.csv` (`id,label`); a JSON file holds
// `[{"tick": t, "edges": [[u,v,w],...], "vertices": [...]}, ...]`.
ObservationSeries load_series(const std::string& path);
ObservationSeries load_series_directory(const std::string& dir);
ObservationSeries series_from_json(const nlohmann::json& j);
nlohmann::json series_to_json(const ObservationSeries& series);
void save_series_directory(const ObservationSeries& series, const std::string& dir);
std::string observation_file_name(Tick tick);

}  // namespace sbtk
