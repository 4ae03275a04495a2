#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "sbtk/graph.hpp"

namespace sbtk {

using FilterIndex = std::uint32_t;

enum class WeightOrder { descending, ascending };

// A simplex given by its vertices, sorted strictly ascending.
struct Simplex {
  std::vector<VertexId> vertices;

  int dimension() const { return static_cast<int>(vertices.size()) - 1; }
  std::vector<Simplex> facets() const;

  auto operator<=>(const Simplex&) const = default;
  bool operator==(const Simplex&) const = default;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

struct FilteredSimplex {
  Simplex simplex;
  FilterIndex filter;

  bool operator==(const FilteredSimplex&) const = default;
};

// Canonical order: filter index, then dimension, then lexicographic vertices.
bool canonical_less(const FilteredSimplex& a, const FilteredSimplex& b);

// Simplices tagged with discrete filter indices; the index t refers to
// weight_ladder[t]. An edgeless complex has an empty ladder and every
// vertex at index 0.
struct FilteredComplex {
  std::vector<FilteredSimplex> simplices;
  std::vector<double> weight_ladder;
  WeightOrder order = WeightOrder::descending;

  FilterIndex max_filter() const;
  int dimension() const;
};

// Throws InvalidComplex when the complex is not closed under faces, a face
// enters after its coface, a simplex is malformed or repeated, or an index
// falls outside the ladder.
void validate_complex(const FilteredComplex& c);

// Distinct edge weights sorted per `order`; position = filter parameter t.
std::vector<double> weight_ladder(const WeightedGraph& g, WeightOrder order);

// Inclusion-maximal cliques (Bron–Kerbosch, pivoting, degeneracy order).
// Isolated vertices come back as singleton cliques. Output sorted.
std::vector<std::vector<VertexId>> maximal_cliques(const WeightedGraph& g);

// Clique-weight-rank filtration: every sub-clique of every maximal clique up
// to dimension max_dim, ranked by the ladder index of its weakest edge.
// Vertices take the earliest index among incident edges (0 if isolated).
FilteredComplex build_filtration(const WeightedGraph& g, WeightOrder order = WeightOrder::descending,
                                 int max_dim = 2);

// One line per simplex: `filter_index;v0 v1 ... vk`.
std::string format_filtration(const FilteredComplex& c);
FilteredComplex parse_filtration(const std::string& text);

WeightOrder parse_weight_order(const std::string& s);
std::string to_string(WeightOrder order);

}  // namespace sbtk
