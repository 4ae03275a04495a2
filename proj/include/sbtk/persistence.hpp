#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbtk/filtration.hpp"

namespace sbtk {

// A homology class alive on [birth, death). An empty death means the class
// never dies. The generator is a Z/2 cycle (a set of simplices of the
// interval's dimension) representing the class at its birth.
struct Interval {
  int dimension = 0;
  FilterIndex birth = 0;
  std::optional<FilterIndex> death;
  std::vector<Simplex> generator;

  bool persistent() const { return !death.has_value(); }
  bool alive_at(FilterIndex t) const { return birth <= t && (!death || t < *death); }
};

struct Barcode {
  std::vector<Interval> intervals;
  FilterIndex max_filter = 0;
  std::vector<double> weight_ladder;
  WeightOrder order = WeightOrder::descending;

  std::size_t alive_count(int dim, FilterIndex t) const;
  std::optional<double> weight_at(FilterIndex t) const;
};

// Standard column reduction over Z/2 with clearing. Intervals are reported
// for dimensions 0..max_dim; zero-length pairs are dropped. Throws
// InvalidComplex when the input violates closure or face monotonicity.
Barcode persistent_homology(const FilteredComplex& c, int max_dim = 1);

// Betti numbers β_0..β_max_dim of the subcomplex {σ : filter(σ) <= at},
// computed from ranks of dense boundary matrices. Independent of the
// reduction above; used as its oracle. Empty subcomplex yields {}.
std::vector<std::size_t> betti_numbers(const FilteredComplex& c, FilterIndex at, int max_dim);

// Zero-dimensional bars from a union-find sweep (elder rule).
struct ComponentBar {
  FilterIndex birth;
  std::optional<FilterIndex> death;

  auto operator<=>(const ComponentBar&) const = default;
};
std::vector<ComponentBar> connected_component_bars(const FilteredComplex& c);

// Z/2 boundary of a chain of equal-dimension simplices.
std::vector<Simplex> chain_boundary(const std::vector<Simplex>& chain);
bool is_cycle(const std::vector<Simplex>& chain);

// Barcode JSON: {"max_filter": t, "intervals": [{"dim": n, "birth": i,
// "death": j|null, "generator": [[v...],...]}]} plus ladder weights.
nlohmann::json barcode_to_json(const Barcode& b);
Barcode barcode_from_json(const nlohmann::json& j);
Barcode load_barcode(const std::string& path);

// Human-readable listing, one block per dimension.
std::string format_barcode_text(const Barcode& b, const std::map<VertexId, std::string>& names = {});

}  // namespace sbtk
