#include "sbtk/filtration.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sbtk/error.hpp"
#include "sbtk/format.hpp"

namespace sbtk {

std::vector<Simplex> Simplex::facets() const {
  std::vector<Simplex> out;
  if (vertices.size() < 2) return out;
  out.reserve(vertices.size());
  for (std::size_t skip = 0; skip < vertices.size(); ++skip) {
    Simplex f;
    f.vertices.reserve(vertices.size() - 1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (i != skip) f.vertices.push_back(vertices[i]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (VertexId v : s.vertices) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool canonical_less(const FilteredSimplex& a, const FilteredSimplex& b) {
  if (a.filter != b.filter) return a.filter < b.filter;
  if (a.simplex.vertices.size() != b.simplex.vertices.size()) {
    return a.simplex.vertices.size() < b.simplex.vertices.size();
  }
  return a.simplex.vertices < b.simplex.vertices;
}

FilterIndex FilteredComplex::max_filter() const {
  FilterIndex m = 0;
  for (const auto& s : simplices) m = std::max(m, s.filter);
  return m;
}

int FilteredComplex::dimension() const {
  int d = -1;
  for (const auto& s : simplices) d = std::max(d, s.simplex.dimension());
  return d;
}

void validate_complex(const FilteredComplex& c) {
  std::unordered_map<Simplex, FilterIndex, SimplexHash> index;
  index.reserve(c.simplices.size());
  const std::size_t ladder = std::max<std::size_t>(c.weight_ladder.size(), 1);
  for (const auto& fs : c.simplices) {
    const auto& v = fs.simplex.vertices;
    if (v.empty()) throw InvalidComplex("empty simplex");
    if (!std::is_sorted(v.begin(), v.end()) || std::adjacent_find(v.begin(), v.end()) != v.end()) {
      throw InvalidComplex("simplex vertices not strictly ascending");
    }
    if (fs.filter >= ladder) {
      throw InvalidComplex("filter index " + std::to_string(fs.filter) + " outside weight ladder");
    }
    if (!index.emplace(fs.simplex, fs.filter).second) throw InvalidComplex("repeated simplex");
  }
  for (const auto& fs : c.simplices) {
    for (const auto& face : fs.simplex.facets()) {
      auto it = index.find(face);
      if (it == index.end()) throw InvalidComplex("missing face of a simplex");
      if (it->second > fs.filter) throw InvalidComplex("face enters after its coface");
    }
  }
}

std::vector<double> weight_ladder(const WeightedGraph& g, WeightOrder order) {
  if (g.edge_count() == 0) throw EmptyGraph("graph has no edges");
  std::vector<double> w;
  w.reserve(g.edge_count());
  for (const auto& e : g.edges()) w.push_back(e.weight);
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  if (order == WeightOrder::descending) std::reverse(w.begin(), w.end());
  return w;
}

namespace {

using Set = std::vector<std::size_t>;  // sorted positions into the vertex list

Set intersect(const Set& a, const Set& b) {
  Set out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Degeneracy ordering by repeated removal of a minimum-degree vertex.
std::vector<std::size_t> degeneracy_order(const std::vector<Set>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> degree(n);
  std::size_t max_deg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    degree[i] = adj[i].size();
    max_deg = std::max(max_deg, degree[i]);
  }
  std::vector<std::vector<std::size_t>> buckets(max_deg + 1);
  for (std::size_t i = 0; i < n; ++i) buckets[degree[i]].push_back(i);
  std::vector<bool> removed(n, false);
  std::vector<std::size_t> order;
  order.reserve(n);
  std::size_t d = 0;
  while (order.size() < n) {
    d = 0;
    while (true) {
      auto& b = buckets[d];
      while (!b.empty() && (removed[b.back()] || degree[b.back()] != d)) b.pop_back();
      if (!b.empty()) break;
      ++d;
    }
    const std::size_t v = buckets[d].back();
    buckets[d].pop_back();
    removed[v] = true;
    order.push_back(v);
    for (std::size_t u : adj[v]) {
      if (!removed[u]) {
        --degree[u];
        buckets[degree[u]].push_back(u);
      }
    }
  }
  return order;
}

void bron_kerbosch_pivot(const std::vector<Set>& adj, Set& r, Set p, Set x,
                         std::vector<Set>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  // Pivot: vertex of P ∪ X with most neighbours in P.
  std::size_t pivot = 0;
  long best = -1;
  for (const Set* side : {&p, &x}) {
    for (std::size_t u : *side) {
      const long k = static_cast<long>(intersect(adj[u], p).size());
      if (k > best) {
        best = k;
        pivot = u;
      }
    }
  }
  Set candidates;
  std::set_difference(p.begin(), p.end(), adj[pivot].begin(), adj[pivot].end(),
                      std::back_inserter(candidates));
  for (std::size_t v : candidates) {
    r.push_back(v);
    bron_kerbosch_pivot(adj, r, intersect(p, adj[v]), intersect(x, adj[v]), out);
    r.pop_back();
    p.erase(std::lower_bound(p.begin(), p.end(), v));
    x.insert(std::lower_bound(x.begin(), x.end(), v), v);
  }
}

}  // namespace

std::vector<std::vector<VertexId>> maximal_cliques(const WeightedGraph& g) {
  const std::vector<VertexId> ids(g.vertices().begin(), g.vertices().end());
  const auto raw = g.adjacency();
  std::vector<Set> adj(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (VertexId v : raw[i]) {
      adj[i].push_back(static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin()));
    }
  }

  const auto order = degeneracy_order(adj);
  std::vector<std::size_t> rank(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  std::vector<Set> found;
  Set r;
  for (std::size_t v : order) {
    Set p;
    Set x;
    for (std::size_t u : adj[v]) (rank[u] > rank[v] ? p : x).push_back(u);
    r.assign(1, v);
    bron_kerbosch_pivot(adj, r, std::move(p), std::move(x), found);
  }

  std::vector<std::vector<VertexId>> cliques;
  cliques.reserve(found.size());
  for (const auto& c : found) {
    std::vector<VertexId> clique;
    clique.reserve(c.size());
    for (std::size_t i : c) clique.push_back(ids[i]);
    std::sort(clique.begin(), clique.end());
    cliques.push_back(std::move(clique));
  }
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

FilteredComplex build_filtration(const WeightedGraph& g, WeightOrder order, int max_dim) {
  if (max_dim < 0) throw InvalidComplex("max_dim must be non-negative");
  FilteredComplex c;
  c.order = order;
  if (g.edge_count() > 0) c.weight_ladder = weight_ladder(g, order);

  auto ladder_index = [&](double w) -> FilterIndex {
    auto it = order == WeightOrder::descending
                  ? std::lower_bound(c.weight_ladder.begin(), c.weight_ladder.end(), w, std::greater<>())
                  : std::lower_bound(c.weight_ladder.begin(), c.weight_ladder.end(), w);
    return static_cast<FilterIndex>(it - c.weight_ladder.begin());
  };

  std::map<std::pair<VertexId, VertexId>, FilterIndex> edge_index;
  std::map<VertexId, FilterIndex> vertex_index;
  for (VertexId v : g.vertices()) vertex_index[v] = 0;
  std::map<VertexId, bool> seen;
  for (const auto& e : g.edges()) {
    const FilterIndex t = ladder_index(e.weight);
    edge_index[{e.u, e.v}] = t;
    for (VertexId v : {e.u, e.v}) {
      if (!seen[v] || t < vertex_index[v]) vertex_index[v] = t;
      seen[v] = true;
    }
  }

  std::unordered_set<Simplex, SimplexHash> emitted;
  const std::size_t max_size = static_cast<std::size_t>(max_dim) + 1;
  for (const auto& clique : maximal_cliques(g)) {
    const std::size_t k_max = std::min(max_size, clique.size());
    std::vector<std::size_t> pick;
    // Enumerate every subset of size 1..k_max in lexicographic order.
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (!pick.empty()) {
        Simplex s;
        s.vertices.reserve(pick.size());
        for (std::size_t i : pick) s.vertices.push_back(clique[i]);
        if (emitted.insert(s).second) {
          FilterIndex t = 0;
          if (s.vertices.size() == 1) {
            t = vertex_index.at(s.vertices[0]);
          } else {
            for (std::size_t a = 0; a < s.vertices.size(); ++a) {
              for (std::size_t b = a + 1; b < s.vertices.size(); ++b) {
                t = std::max(t, edge_index.at({s.vertices[a], s.vertices[b]}));
              }
            }
          }
          c.simplices.push_back({std::move(s), t});
        }
      }
      if (pick.size() == k_max) return;
      for (std::size_t i = start; i < clique.size(); ++i) {
        pick.push_back(i);
        rec(i + 1);
        pick.pop_back();
      }
    };
    rec(0);
  }
  std::sort(c.simplices.begin(), c.simplices.end(), canonical_less);
  return c;
}

std::string format_filtration(const FilteredComplex& c) {
  std::string out;
  for (const auto& fs : c.simplices) {
    out += std::to_string(fs.filter) + ";";
    for (std::size_t i = 0; i < fs.simplex.vertices.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(fs.simplex.vertices[i]);
    }
    out += '\n';
  }
  return out;
}

FilteredComplex parse_filtration(const std::string& text) {
  FilteredComplex c;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  FilterIndex top = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto semi = line.find(';');
    FilteredSimplex fs{};
    if (semi == std::string_view::npos || !parse_int(line.substr(0, semi), fs.filter)) {
      throw ParseError("filtration line " + std::to_string(line_no));
    }
    std::istringstream vs{std::string(line.substr(semi + 1))};
    std::string tok;
    while (vs >> tok) {
      VertexId v = 0;
      if (!parse_int(tok, v)) throw ParseError("filtration line " + std::to_string(line_no));
      fs.simplex.vertices.push_back(v);
    }
    top = std::max(top, fs.filter);
    c.simplices.push_back(std::move(fs));
  }
  // The dump carries no weights; a placeholder ladder keeps indices in range.
  if (!c.simplices.empty()) {
    c.weight_ladder.resize(top + 1);
    for (FilterIndex t = 0; t <= top; ++t) c.weight_ladder[t] = static_cast<double>(top + 1 - t);
  }
  std::sort(c.simplices.begin(), c.simplices.end(), canonical_less);
  return c;
}

WeightOrder parse_weight_order(const std::string& s) {
  if (s == "descending" || s == "desc") return WeightOrder::descending;
  if (s == "ascending" || s == "asc") return WeightOrder::ascending;
  throw ConfigError("unknown weight order '" + s + "'");
}

std::string to_string(WeightOrder order) {
  return order == WeightOrder::descending ? "descending" : "ascending";
}

}  // namespace sbtk
