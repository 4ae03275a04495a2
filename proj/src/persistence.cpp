#include "sbtk/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "sbtk/error.hpp"
#include "sbtk/format.hpp"
#include "sbtk/union_find.hpp"

using nlohmann::json;

namespace sbtk {

std::size_t Barcode::alive_count(int dim, FilterIndex t) const {
  return static_cast<std::size_t>(std::count_if(intervals.begin(), intervals.end(), [&](const Interval& iv) {
    return iv.dimension == dim && iv.alive_at(t);
  }));
}

std::optional<double> Barcode::weight_at(FilterIndex t) const {
  if (t < weight_ladder.size()) return weight_ladder[t];
  return std::nullopt;
}

namespace {

using Column = std::vector<std::uint32_t>;
constexpr std::int64_t kNone = -1;

// a ^= b over sorted index lists.
void add_column(Column& a, const Column& b, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

bool interval_less(const Interval& a, const Interval& b) {
  if (a.dimension != b.dimension) return a.dimension < b.dimension;
  if (a.birth != b.birth) return a.birth < b.birth;
  if (a.death != b.death) {
    if (!a.death) return false;
    if (!b.death) return true;
    return *a.death < *b.death;
  }
  return a.generator < b.generator;
}

}  // namespace

Barcode persistent_homology(const FilteredComplex& c, int max_dim) {
  if (max_dim < 0) throw InvalidComplex("max_dim must be non-negative");
  validate_complex(c);

  std::vector<FilteredSimplex> cells = c.simplices;
  std::sort(cells.begin(), cells.end(), canonical_less);
  const std::size_t n = cells.size();

  std::unordered_map<Simplex, std::uint32_t, SimplexHash> position;
  position.reserve(n);
  for (std::size_t i = 0; i < n; ++i) position.emplace(cells[i].simplex, static_cast<std::uint32_t>(i));

  const int top = std::min(c.dimension(), max_dim + 1);
  std::vector<std::vector<std::uint32_t>> by_dim(std::max(top, 0) + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const int d = cells[i].simplex.dimension();
    if (d <= top) by_dim[d].push_back(static_cast<std::uint32_t>(i));
  }

  std::vector<std::int64_t> pivot_owner(n, kNone);
  std::vector<bool> cleared(n, false);
  std::vector<Column> reduced(n);
  std::vector<Column> basis_change(n);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<std::uint32_t> essential;
  Column scratch;

  for (int d = top; d >= 1; --d) {
    const bool track = d <= max_dim;
    for (std::uint32_t j : by_dim[d]) {
      if (cleared[j]) continue;
      Column col;
      for (const auto& face : cells[j].simplex.facets()) col.push_back(position.at(face));
      std::sort(col.begin(), col.end());
      Column v;
      if (track) v.push_back(j);
      while (!col.empty()) {
        const std::int64_t owner = pivot_owner[col.back()];
        if (owner == kNone) break;
        add_column(col, reduced[owner], scratch);
        if (track) add_column(v, basis_change[owner], scratch);
      }
      if (col.empty()) {
        if (track) {
          essential.push_back(j);
          basis_change[j] = std::move(v);
        }
        continue;
      }
      const std::uint32_t low = col.back();
      pivot_owner[low] = j;
      cleared[low] = true;
      pairs.emplace_back(low, j);
      reduced[j] = std::move(col);
      if (track) basis_change[j] = std::move(v);
    }
  }
  if (top >= 0) {
    for (std::uint32_t j : by_dim[0]) {
      if (!cleared[j]) essential.push_back(j);
    }
  }

  auto to_chain = [&](const Column& col) {
    std::vector<Simplex> chain;
    chain.reserve(col.size());
    for (std::uint32_t i : col) chain.push_back(cells[i].simplex);
    std::sort(chain.begin(), chain.end());
    return chain;
  };

  Barcode b;
  b.max_filter = c.max_filter();
  b.weight_ladder = c.weight_ladder;
  b.order = c.order;
  for (const auto& [creator, destroyer] : pairs) {
    const int d = cells[creator].simplex.dimension();
    if (d > max_dim) continue;
    if (cells[creator].filter == cells[destroyer].filter) continue;
    auto gen = d == 0 ? std::vector<Simplex>{cells[creator].simplex} : to_chain(reduced[destroyer]);
    b.intervals.push_back({d, cells[creator].filter, cells[destroyer].filter, std::move(gen)});
  }
  for (std::uint32_t j : essential) {
    const int d = cells[j].simplex.dimension();
    if (d > max_dim) continue;
    Interval iv{d, cells[j].filter, std::nullopt, {}};
    iv.generator = d == 0 ? std::vector<Simplex>{cells[j].simplex} : to_chain(basis_change[j]);
    b.intervals.push_back(std::move(iv));
  }
  std::sort(b.intervals.begin(), b.intervals.end(), interval_less);
  return b;
}

namespace {

// Rank over Z/2 of a set of bit-packed vectors (XOR basis keyed by top bit).
std::size_t gf2_rank(std::vector<std::vector<std::uint64_t>> vectors) {
  std::unordered_map<std::size_t, std::vector<std::uint64_t>> basis;
  for (auto& vec : vectors) {
    while (true) {
      std::size_t word = vec.size();
      while (word > 0 && vec[word - 1] == 0) --word;
      if (word == 0) break;
      const std::size_t top = (word - 1) * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(vec[word - 1])));
      auto it = basis.find(top);
      if (it == basis.end()) {
        basis.emplace(top, vec);
        break;
      }
      for (std::size_t w = 0; w < vec.size(); ++w) vec[w] ^= it->second[w];
    }
  }
  return basis.size();
}

}  // namespace

std::vector<std::size_t> betti_numbers(const FilteredComplex& c, FilterIndex at, int max_dim) {
  std::vector<std::vector<Simplex>> by_dim;
  for (const auto& fs : c.simplices) {
    if (fs.filter > at) continue;
    const auto d = static_cast<std::size_t>(fs.simplex.dimension());
    if (by_dim.size() <= d) by_dim.resize(d + 1);
    by_dim[d].push_back(fs.simplex);
  }
  if (by_dim.empty()) return {};
  for (auto& group : by_dim) std::sort(group.begin(), group.end());

  // rank of ∂_d : C_d -> C_{d-1}
  auto boundary_rank = [&](std::size_t d) -> std::size_t {
    if (d == 0 || d >= by_dim.size() || by_dim[d].empty()) return 0;
    const auto& rows = by_dim[d - 1];
    const std::size_t words = (rows.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> cols;
    cols.reserve(by_dim[d].size());
    for (const auto& s : by_dim[d]) {
      std::vector<std::uint64_t> bits(words, 0);
      for (const auto& face : s.facets()) {
        auto it = std::lower_bound(rows.begin(), rows.end(), face);
        if (it == rows.end() || *it != face) throw InvalidComplex("missing face in subcomplex");
        const auto r = static_cast<std::size_t>(it - rows.begin());
        bits[r / 64] ^= std::uint64_t{1} << (r % 64);
      }
      cols.push_back(std::move(bits));
    }
    return gf2_rank(std::move(cols));
  };

  std::vector<std::size_t> betti(static_cast<std::size_t>(max_dim) + 1, 0);
  for (std::size_t d = 0; d < betti.size(); ++d) {
    const std::size_t count = d < by_dim.size() ? by_dim[d].size() : 0;
    const std::size_t cycles = count - boundary_rank(d);
    betti[d] = cycles - boundary_rank(d + 1);
  }
  return betti;
}

std::vector<ComponentBar> connected_component_bars(const FilteredComplex& c) {
  std::vector<FilteredSimplex> cells = c.simplices;
  std::sort(cells.begin(), cells.end(), canonical_less);
  std::unordered_map<VertexId, std::size_t> slot;
  std::vector<FilterIndex> birth;
  std::vector<std::size_t> arrival;  // tie-break: earlier arrival is elder
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].simplex.dimension() != 0) continue;
    slot.emplace(cells[i].simplex.vertices[0], birth.size());
    birth.push_back(cells[i].filter);
    arrival.push_back(i);
  }
  UnionFind uf(birth.size());
  std::vector<ComponentBar> bars;
  for (const auto& fs : cells) {
    if (fs.simplex.dimension() != 1) continue;
    std::size_t a = uf.find(slot.at(fs.simplex.vertices[0]));
    std::size_t b = uf.find(slot.at(fs.simplex.vertices[1]));
    if (a == b) continue;
    // a becomes the elder root.
    if (std::pair(birth[b], arrival[b]) < std::pair(birth[a], arrival[a])) std::swap(a, b);
    if (birth[b] != fs.filter) bars.push_back({birth[b], fs.filter});
    uf.attach(b, a);
  }
  for (std::size_t i = 0; i < birth.size(); ++i) {
    if (uf.find(i) == i) bars.push_back({birth[i], std::nullopt});
  }
  std::sort(bars.begin(), bars.end());
  return bars;
}

std::vector<Simplex> chain_boundary(const std::vector<Simplex>& chain) {
  std::vector<Simplex> faces;
  for (const auto& s : chain) {
    for (auto& f : s.facets()) faces.push_back(std::move(f));
  }
  std::sort(faces.begin(), faces.end());
  std::vector<Simplex> out;
  for (std::size_t i = 0; i < faces.size();) {
    std::size_t j = i;
    while (j < faces.size() && faces[j] == faces[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(faces[i]);
    i = j;
  }
  return out;
}

bool is_cycle(const std::vector<Simplex>& chain) { return chain_boundary(chain).empty(); }

json barcode_to_json(const Barcode& b) {
  json intervals = json::array();
  for (const auto& iv : b.intervals) {
    json gen = json::array();
    for (const auto& s : iv.generator) gen.push_back(s.vertices);
    json entry = {{"dim", iv.dimension}, {"birth", iv.birth}};
    entry["death"] = iv.death ? json(*iv.death) : json(nullptr);
    if (auto w = b.weight_at(iv.birth)) entry["birth_weight"] = *w;
    if (iv.death) {
      if (auto w = b.weight_at(*iv.death)) entry["death_weight"] = *w;
    }
    entry["generator"] = gen;
    intervals.push_back(entry);
  }
  return {{"max_filter", b.max_filter},
          {"order", to_string(b.order)},
          {"weight_ladder", b.weight_ladder},
          {"intervals", intervals}};
}

Barcode barcode_from_json(const json& j) {
  Barcode b;
  try {
    b.max_filter = j.at("max_filter").get<FilterIndex>();
    if (j.contains("weight_ladder")) b.weight_ladder = j["weight_ladder"].get<std::vector<double>>();
    if (j.contains("order")) b.order = parse_weight_order(j["order"].get<std::string>());
    for (const auto& e : j.at("intervals")) {
      Interval iv;
      iv.dimension = e.at("dim").get<int>();
      iv.birth = e.at("birth").get<FilterIndex>();
      if (!e.at("death").is_null()) iv.death = e["death"].get<FilterIndex>();
      if (e.contains("generator")) {
        for (const auto& s : e["generator"]) iv.generator.push_back({s.get<std::vector<VertexId>>()});
      }
      b.intervals.push_back(std::move(iv));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("barcode JSON: ") + e.what());
  }
  return b;
}

Barcode load_barcode(const std::string& path) {
  try {
    return barcode_from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_barcode_text(const Barcode& b, const std::map<VertexId, std::string>& names) {
  auto label = [&](VertexId v) {
    auto it = names.find(v);
    return it == names.end() ? std::to_string(v) : it->second;
  };
  auto endpoint = [&](FilterIndex t) {
    std::string s = std::to_string(t);
    if (auto w = b.weight_at(t)) s += " (w=" + format_double(*w) + ")";
    return s;
  };
  std::string out;
  int current = -1;
  for (const auto& iv : b.intervals) {
    if (iv.dimension != current) {
      current = iv.dimension;
      out += "beta_" + std::to_string(current) + ":\n";
    }
    out += "[" + endpoint(iv.birth) + ", " + (iv.death ? endpoint(*iv.death) + ")" : std::string("infinity)")) + ": ";
    for (std::size_t k = 0; k < iv.generator.size(); ++k) {
      if (k) out += " + ";
      out += "[";
      const auto& vs = iv.generator[k].vertices;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ",";
        out += label(vs[i]);
      }
      out += "]";
    }
    out += "\n";
  }
  return out;
}

}  // namespace sbtk
