// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "sbtk/chu.hpp"
#include "sbtk/entropy.hpp"
#include "sbtk/error.hpp"
#include "sbtk/filtration.hpp"
#include "sbtk/immune.hpp"
#include "sbtk/pea.hpp"
#include "sbtk/persistence.hpp"
#include "support.hpp"

using namespace sbtk;

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

struct Outcome {
  bool ok = true;
  std::string failure;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      failure = what;
    }
  }
};

Barcode square_barcode() {
  return persistent_homology(build_filtration(load_edge_list(testing::fixture("square_of_triangles.csv")), WeightOrder::descending, 2),
                             1);
}

void square_golden(Outcome& o) {
  const auto b = square_barcode();
  const FilterIndex end = b.max_filter;
  o.require(b.alive_count(0, end) == 1, "beta_0 != 1");
  o.require(b.alive_count(1, end) == 1, "beta_1 != 1");
  const Interval* loop = nullptr;
  for (const auto& iv : b.intervals) {
    if (iv.dimension == 1) loop = &iv;
  }
  o.require(loop != nullptr, "no dimension-1 bar");
  if (!loop) return;
  o.require(loop->birth == 3, "dimension-1 bar not born at filter 3");
  o.require(!loop->death, "dimension-1 bar dies");
  std::set<VertexId> verts;
  for (const auto& s : loop->generator) {
    o.require(s.dimension() == 1, "generator contains a non-edge");
    verts.insert(s.vertices.begin(), s.vertices.end());
  }
  o.require(loop->generator.size() == 4, "generator does not have four edges");
  o.require(verts.size() == 4, "generator does not have four vertices");
  o.require(is_cycle(loop->generator), "generator is not a cycle");
  o.detail << "beta=(1,1), bar [3,inf), cycle of " << loop->generator.size() << " edges";
}

void square_entropy(Outcome& o) {
  const double h = persistent_entropy(square_barcode());
  o.require(std::abs(h - 0.5) <= 0.001, "H outside 0.5 +- 0.001");
  o.detail << "H = " << h;
}

void homology_oracle(Outcome& o) {
  std::mt19937_64 rng(2024);
  const int graphs = 600;
  std::size_t checks = 0;
  for (int i = 0; i < graphs && o.ok; ++i) {
    const auto g = testing::random_graph(rng, 8, i % 3 == 0);
    const auto order = i % 2 ? WeightOrder::ascending : WeightOrder::descending;
    const auto c = build_filtration(g, order, static_cast<int>(g.vertex_count()) - 1);
    const int top = std::max(0, c.dimension());
    const auto b = persistent_homology(c, top);
    for (FilterIndex t = 0; t <= c.max_filter(); ++t) {
      const auto betti = betti_numbers(c, t, top);
      long chi = 0;
      long alternating = 0;
      for (const auto& fs : c.simplices) {
        if (fs.filter <= t) chi += fs.simplex.dimension() % 2 ? -1 : 1;
      }
      for (int k = 0; k <= top; ++k) {
        o.require(b.alive_count(k, t) == betti[k], "barcode Betti count differs from rank Betti number");
        alternating += (k % 2 ? -1 : 1) * static_cast<long>(betti[k]);
      }
      o.require(chi == alternating, "Euler characteristic mismatch");
      ++checks;
    }
  }
  o.detail << graphs << " graphs, " << checks << " filter indices";
}

void entropy_properties(Outcome& o) {
  std::mt19937_64 rng(2025);
  const int barcodes = 1500;
  for (int i = 0; i < barcodes && o.ok; ++i) {
    Barcode b;
    b.max_filter = static_cast<FilterIndex>(testing::below(rng, 30));
    const std::size_t n = 1 + testing::below(rng, 20);
    for (std::size_t k = 0; k < n; ++k) {
      const auto birth = static_cast<FilterIndex>(testing::below(rng, b.max_filter + 1));
      std::optional<FilterIndex> death;
      if (birth < b.max_filter && testing::below(rng, 2)) {
        death = birth + 1 + static_cast<FilterIndex>(testing::below(rng, b.max_filter - birth));
      }
      b.intervals.push_back({static_cast<int>(testing::below(rng, 3)), birth, death, {}});
    }
    const auto lengths = bar_lengths(b);
    const double h = persistent_entropy(b);
    o.require(h >= 0.0, "negative entropy");
    o.require(h <= std::log(static_cast<double>(lengths.size())) + 1e-12, "entropy above ln(#bars)");

    auto shuffled = b;
    std::shuffle(shuffled.intervals.begin(), shuffled.intervals.end(), rng);
    o.require(persistent_entropy(shuffled) == h, "not permutation invariant");

    const double s = 1e-3 + 1e3 * testing::uniform01(rng);
    std::vector<double> scaled;
    for (double l : lengths) scaled.push_back(s * l);
    o.require(std::abs(entropy_of_lengths(scaled) - h) <= 1e-12 * std::max(1.0, h), "not scale invariant");

    const double len = 0.01 + 100.0 * testing::uniform01(rng);
    const double ln_n = std::log(static_cast<double>(n));
    o.require(std::abs(entropy_of_lengths(std::vector<double>(n, len)) - ln_n) <= 4 * kUlp * std::max(1.0, ln_n),
              "equal bars differ from ln n beyond machine precision");
  }
  o.detail << barcodes << " random barcodes";
}

void chu_golden(Outcome& o) {
  const auto one = full_chu({{"elicits", 0, 1}, {"reduces", 0, 1}});
  const std::vector<ChuState> table{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1}, {2, 2}};
  o.require(one.states == table, "two-action space differs from the 9-state table");

  Barcode b;
  b.max_filter = 1;
  b.intervals.push_back({1, 0, std::nullopt, {Simplex{{1, 13}}}});
  const auto pairs = hda_from_barcode(b, {{"elicits", "reduces"}, true, {{"elicits", "reduces"}}});
  o.require(pairs.size() == 1, "expected one coupled pair");
  if (!o.ok) return;
  const auto& sub = pairs[0].space;
  o.require(sub.size() == 25, "subsystem does not have 25 states");
  const auto reference = testing::read_columns(testing::fixture("paired_agents.csv"));
  try {
    const auto perm = match_columns(sub, reference);
    o.require(std::set<std::size_t>(perm.begin(), perm.end()).size() == 25, "column mapping not a bijection");
  } catch (const DataError& e) {
    o.require(false, std::string("columns do not match: ") + e.what());
  }

  const auto h = hasse(one);
  auto has_edge = [&](const ChuState& s, const ChuState& t) {
    for (const auto& [a, z] : h.edges) {
      if (h.nodes[a] == s && h.nodes[z] == t) return true;
    }
    return false;
  };
  o.require(has_edge({1, 0}, {1, 1}), "missing covering (1,0)->(1,1)");
  o.require(!has_edge({1, 0}, {0, 1}), "spurious edge (1,0)->(0,1)");
  o.detail << "9-state table, 25 states matched, covering relation ok";
}

void simulation_structure(Outcome& o) {
  SimConfig config;  // 50 antibodies, injections at 40 and 120, seed 1
  o.require(config.repertoire <= 256 && config.injections.size() == 2, "config outside the desk-scale bounds");
  const auto series = run(config);
  std::vector<std::pair<Tick, Barcode>> barcodes;
  for (const auto& obs : series.observations()) {
    barcodes.emplace_back(obs.tick, persistent_homology(build_filtration(obs.graph, WeightOrder::descending, 2), 1));
  }
  const auto chrono = chronogram(barcodes);
  const double max_h = chrono.max_h();
  const SegmentParams params{0.05 * max_h, 5, 0.25 * max_h};
  const auto segs = segment(chrono, params);
  std::size_t peaks = 0;
  for (const auto& s : segs) peaks += s.kind == SegmentKind::peak;
  o.require(peaks == 2, "expected exactly two peaks, found " + std::to_string(peaks));

  const auto pea = build_pea(segs, params.eps);
  const auto& init = pea.states[pea.initial].invariant;
  o.require(init.h_min == 0.0 && init.h_max == 0.0, "initial state is not H = 0");
  bool memory_loop = false;
  for (const auto& t : pea.transitions) {
    if (t.from_data && t.from == t.to && pea.states[t.from].invariant.h_min > 0.0) memory_loop = true;
  }
  o.require(memory_loop, "no positive-entropy state with a self-loop");
  o.detail << series.size() << " observations, " << peaks << " peaks, " << pea.states.size() << " states, "
           << pea.transitions.size() << " transitions";
}

AffinityMatrix three(double j01, double j02, double j12) {
  AffinityMatrix J(3);
  J.set(0, 1, j01);
  J.set(0, 2, j02);
  J.set(1, 2, j12);
  return J;
}

void parisi_fixed_points(Outcome& o) {
  const std::vector<AffinityMatrix> instances{three(0.5, -0.8, -0.3), three(0.4, 0.4, 0.4), three(-0.6, -0.6, -0.6),
                                              three(0.9, -0.2, 0.7),  three(-0.5, 0.5, 0.0), three(1.0, -1.0, 0.25)};
  std::mt19937_64 rng(7);
  std::size_t fixed = 0;
  for (const auto& J : instances) {
    for (double S : {0.0, 0.2, -0.2}) {
      for (unsigned start = 0; start < 8; ++start) {
        for (bool async : {false, true}) {
          std::vector<Antibody> pop;
          for (VertexId i = 0; i < 3; ++i) {
            const double c = (start >> i) & 1;
            pop.push_back({i, {i, 12}, c, c, false});
          }
          StepParams p;
          p.S = S;
          p.asynchronous = async;
          std::vector<double> prev;
          bool settled = false;
          for (int t = 0; t < 100 && !settled; ++t) {
            step(pop, J, p, rng);
            std::vector<double> c;
            for (const auto& a : pop) c.push_back(a.c);
            settled = c == prev;
            prev = c;
          }
          if (!settled) continue;  // period-2 orbits of the synchronous map are not fixed points
          ++fixed;
          for (std::size_t i = 0; i < 3; ++i) {
            double h = S;
            for (std::size_t k = 0; k < 3; ++k) h += J(i, k) * prev[k];
            o.require((prev[i] == 1.0) == (h > 0.0), "fixed point violates c_i = 1 <=> h_i > 0");
            o.require(prev[i] == 0.0 || prev[i] == 1.0, "non-binary concentration at a fixed point");
          }
        }
      }
    }
  }
  o.require(fixed > 0, "no fixed point reached");
  o.detail << fixed << " fixed points checked";
}

std::vector<std::vector<Antibody>> sample_populations() {
  std::vector<std::vector<Antibody>> out;
  SimConfig config;
  auto sim = initialise(config);
  std::mt19937_64 rng(config.seed);
  for (auto& a : sim.population) {
    if (a.antigen) {
      a.c = 1.0;
      a.volume = 1.0;
    }
  }
  for (int t = 0; t < 30; ++t) {
    step(sim.population, sim.J, config.step, rng);
    if (t % 3 == 0) out.push_back(sim.population);
  }
  std::mt19937_64 gen(99);
  for (int k = 0; k < 50; ++k) {
    std::vector<Antibody> pop;
    for (VertexId i = 0; i < 24; ++i) {
      const auto bits = static_cast<std::uint32_t>(testing::below(gen, 4096));
      pop.push_back({i, {bits, 12}, 1.0, testing::below(gen, 5) ? testing::uniform01(gen) : 0.0, false});
      pop.push_back({i + 100, {~bits & 0xfffu, 12}, 1.0, testing::uniform01(gen), false});
    }
    out.push_back(pop);
  }
  return out;
}

bool same_bars(const Barcode& a, const Barcode& b) {
  if (a.intervals.size() != b.intervals.size()) return false;
  for (std::size_t i = 0; i < a.intervals.size(); ++i) {
    const auto& x = a.intervals[i];
    const auto& y = b.intervals[i];
    if (x.dimension != y.dimension || x.birth != y.birth || x.death != y.death || x.generator != y.generator) {
      return false;
    }
  }
  return true;
}

void homogeneity(Outcome& o) {
  std::size_t edges = 0;
  const auto pops = sample_populations();
  for (const auto& pop : pops) {
    const auto base = coexistence_graph(pop);
    if (base.edge_count() == 0) continue;
    const auto base_c = build_filtration(base, WeightOrder::descending, 2);
    const auto base_b = persistent_homology(base_c, 1);
    for (double lambda : {0.5, 2.0, 10.0}) {
      auto scaled = pop;
      for (auto& a : scaled) a.volume *= lambda;
      const auto g = coexistence_graph(scaled);
      const auto be = base.edges();
      const auto se = g.edges();
      o.require(be.size() == se.size(), "edge sets differ after scaling");
      if (!o.ok) return;
      for (std::size_t e = 0; e < be.size(); ++e) {
        const double want = lambda * be[e].weight;
        o.require(std::abs(se[e].weight - want) <= 4 * kUlp * want, "edge weight not scaled by lambda");
        ++edges;
      }
      const auto c = build_filtration(g, WeightOrder::descending, 2);
      o.require(c.simplices == base_c.simplices, "filtration order changed");
      o.require(same_bars(persistent_homology(c, 1), base_b), "index-mode barcode changed");
    }
  }
  o.detail << pops.size() << " populations, " << edges << " scaled edges";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {"1 small-graph golden barcode", 1.0, square_golden},
      {"2 persistent entropy worked example", 1.0, square_entropy},
      {"3 homology oracle suite", 60.0, homology_oracle},
      {"4 entropy property suite", 10.0, entropy_properties},
      {"5 Chu space golden tests", 1.0, chu_golden},
      {"6 seeded two-injection simulation", 300.0, simulation_structure},
      {"7 three-node fixed points", 1.0, parisi_fixed_points},
      {"8 coexistence homogeneity", 5.0, homogeneity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.require(false, "over time budget");
    failures += !o.ok;
    std::printf("%s criterion %s (%.3f s): %s\n", o.ok ? "PASS" : "FAIL", c.name, secs,
                o.ok ? o.detail.str().c_str() : o.failure.c_str());
  }
  return failures == 0 ? 0 : 1;
}
