#include "sbtk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "sbtk/error.hpp"
#include "sbtk/format.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sbtk {

void WeightedGraph::add_vertex(VertexId v) { vertices_.insert(v); }

void WeightedGraph::add_edge(VertexId u, VertexId v, double weight) {
  if (u == v) throw SelfLoop("vertex " + std::to_string(u));
  if (!std::isfinite(weight) || weight <= 0.0) {
    throw NonPositiveWeight("edge " + std::to_string(u) + "-" + std::to_string(v) +
                            " has weight " + format_double(weight));
  }
  if (u > v) std::swap(u, v);
  auto [it, inserted] = edges_.emplace(std::make_pair(u, v), weight);
  if (!inserted) {
    throw DuplicateEdge("edge " + std::to_string(u) + "-" + std::to_string(v));
  }
  vertices_.insert(u);
  vertices_.insert(v);
}

void WeightedGraph::set_name(VertexId v, std::string name) { names_[v] = std::move(name); }

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [key, w] : edges_) out.push_back({key.first, key.second, w});
  return out;
}

std::optional<double> WeightedGraph::weight(VertexId u, VertexId v) const {
  if (u > v) std::swap(u, v);
  auto it = edges_.find({u, v});
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::string WeightedGraph::label(VertexId v) const {
  auto it = names_.find(v);
  return it == names_.end() ? std::to_string(v) : it->second;
}

std::vector<std::vector<VertexId>> WeightedGraph::adjacency() const {
  std::vector<VertexId> ids(vertices_.begin(), vertices_.end());
  auto pos = [&](VertexId v) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
  };
  std::vector<std::vector<VertexId>> adj(ids.size());
  for (const auto& [key, w] : edges_) {
    adj[pos(key.first)].push_back(key.second);
    adj[pos(key.second)].push_back(key.first);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

void ObservationSeries::append(Tick tick, WeightedGraph graph) {
  if (!observations_.empty() && tick <= observations_.back().tick) {
    throw UnorderedTicks("tick " + std::to_string(tick) + " after " +
                         std::to_string(observations_.back().tick));
  }
  observations_.push_back({tick, std::move(graph)});
}

WeightedGraph parse_edge_list(const std::string& text, const std::string& origin) {
  WeightedGraph g;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto where = origin + ":" + std::to_string(line_no);

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }

    VertexId u = 0;
    VertexId v = 0;
    if (fields.size() == 1) {
      if (!parse_int(fields[0], u)) throw ParseError(where + ": bad vertex id");
      g.add_vertex(u);
      continue;
    }
    if (fields.size() != 3) throw ParseError(where + ": expected u,v,weight");
    double w = 0.0;
    if (!parse_int(fields[0], u) || !parse_int(fields[1], v)) {
      throw ParseError(where + ": bad vertex id");
    }
    if (!parse_double(fields[2], w)) throw ParseError(where + ": non-numeric weight");
    try {
      g.add_edge(u, v, w);
    } catch (const DuplicateEdge& e) {
      throw DuplicateEdge(where + ": " + std::to_string(u) + "," + std::to_string(v));
    } catch (const SelfLoop&) {
      throw SelfLoop(where + ": " + std::to_string(u));
    } catch (const NonPositiveWeight&) {
      throw NonPositiveWeight(where + ": weight " + std::string(trim(fields[2])));
    }
  }
  return g;
}

WeightedGraph load_edge_list(const std::string& path) {
  return parse_edge_list(read_file(path), path);
}

std::string format_edge_list(const WeightedGraph& g) {
  std::string out;
  std::set<VertexId> touched;
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u) + "," + std::to_string(e.v) + "," + format_double(e.weight) + "\n";
    touched.insert(e.u);
    touched.insert(e.v);
  }
  for (VertexId v : g.vertices()) {
    if (!touched.count(v)) out += std::to_string(v) + "\n";
  }
  return out;
}

void save_edge_list(const WeightedGraph& g, const std::string& path) {
  write_file(path, format_edge_list(g));
}

WeightedGraph from_symmetric_matrix(const std::vector<std::vector<double>>& m, double threshold) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) {
      throw NotSquare("row " + std::to_string(i) + " has " + std::to_string(m[i].size()) +
                      " entries, expected " + std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(std::abs(m[i][j] - m[j][i]) <= kSymmetryTolerance)) {
        throw NotSymmetric("entries (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  WeightedGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex(static_cast<VertexId>(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m[i][j] > threshold) {
        g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j), m[i][j]);
      }
    }
  }
  return g;
}

std::string observation_file_name(Tick tick) { return "obs_" + std::to_string(tick) + ".csv"; }

namespace {

std::map<VertexId, std::string> load_names_csv(const std::string& path) {
  std::map<VertexId, std::string> names;
  std::istringstream in(read_file(path));
  std::string raw;
  while (std::getline(in, raw)) {
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto comma = line.find(',');
    VertexId id = 0;
    if (comma == std::string_view::npos || !parse_int(line.substr(0, comma), id)) {
      throw ParseError(path + ": expected id,label");
    }
    names[id] = std::string(trim(line.substr(comma + 1)));
  }
  return names;
}

}  // namespace

ObservationSeries load_series_directory(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ParseError(dir + " is not a directory");
  std::vector<std::pair<Tick, std::string>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("obs_", 0) != 0 || entry.path().extension() != ".csv") continue;
    Tick tick = 0;
    if (!parse_int(std::string_view(name).substr(4, name.size() - 8), tick)) {
      throw ParseError(entry.path().string() + ": cannot read tick from file name");
    }
    files.emplace_back(tick, entry.path().string());
  }
  std::sort(files.begin(), files.end());
  std::map<VertexId, std::string> names;
  if (fs::exists(fs::path(dir) / "names.csv")) {
    names = load_names_csv((fs::path(dir) / "names.csv").string());
  }
  ObservationSeries series;
  for (const auto& [tick, path] : files) {
    auto g = load_edge_list(path);
    for (VertexId v : g.vertices()) {
      if (auto it = names.find(v); it != names.end()) g.set_name(v, it->second);
    }
    series.append(tick, std::move(g));
  }
  return series;
}

ObservationSeries series_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("series JSON must be an array");
  ObservationSeries series;
  try {
    for (const auto& obs : j) {
      WeightedGraph g;
      for (const auto& e : obs.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw ParseError("edge must be [u,v,w]");
        g.add_edge(e[0].get<VertexId>(), e[1].get<VertexId>(), e[2].get<double>());
      }
      if (obs.contains("vertices")) {
        for (const auto& v : obs["vertices"]) g.add_vertex(v.get<VertexId>());
      }
      if (obs.contains("names")) {
        for (const auto& [key, label] : obs["names"].items()) {
          VertexId id = 0;
          if (!parse_int(key, id)) throw ParseError("bad name key " + key);
          if (g.has_vertex(id)) g.set_name(id, label.get<std::string>());
        }
      }
      series.append(obs.at("tick").get<Tick>(), std::move(g));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("series JSON: ") + e.what());
  }
  return series;
}

json series_to_json(const ObservationSeries& series) {
  json out = json::array();
  for (const auto& obs : series.observations()) {
    json edges = json::array();
    for (const auto& e : obs.graph.edges()) edges.push_back({e.u, e.v, e.weight});
    json vertices = json::array();
    for (VertexId v : obs.graph.vertices()) vertices.push_back(v);
    json entry = {{"tick", obs.tick}, {"edges", edges}, {"vertices", vertices}};
    if (!obs.graph.names().empty()) {
      json names = json::object();
      for (const auto& [id, label] : obs.graph.names()) names[std::to_string(id)] = label;
      entry["names"] = names;
    }
    out.push_back(entry);
  }
  return out;
}

ObservationSeries load_series(const std::string& path) {
  if (fs::is_directory(path)) return load_series_directory(path);
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return series_from_json(j);
}

void save_series_directory(const ObservationSeries& series, const std::string& dir) {
  fs::create_directories(dir);
  std::map<VertexId, std::string> names;
  for (const auto& obs : series.observations()) {
    save_edge_list(obs.graph, (fs::path(dir) / observation_file_name(obs.tick)).string());
    for (const auto& [id, label] : obs.graph.names()) names[id] = label;
  }
  if (!names.empty()) {
    std::string text;
    for (const auto& [id, label] : names) text += std::to_string(id) + "," + label + "\n";
    write_file((fs::path(dir) / "names.csv").string(), text);
  }
}

}  // namespace sbtk
