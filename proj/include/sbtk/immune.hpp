#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sbtk/graph.hpp"

namespace sbtk {

struct Bitstring {
  std::uint32_t value = 0;
  unsigned width = 12;

  Bitstring complement() const { return {~value & mask(), width}; }
  Bitstring flip(unsigned bit) const { return {(value ^ (1u << bit)) & mask(), width}; }
  std::uint32_t mask() const { return width >= 32 ? ~0u : (1u << width) - 1u; }
};

// Throws WidthMismatch on unequal widths.
unsigned hamming(const Bitstring& a, const Bitstring& b);

// A clone of the population. Antigens live in the same population so they
// can appear in the coexistence graph; their concentration is driven by
// injections and clearance rather than by the threshold rule.
struct Antibody {
  VertexId id = 0;
  Bitstring bits;
  double c = 0.0;
  double volume = 0.0;
  bool antigen = false;
};

// Width-1 <= d <= width (11 <= d <= 12 for 12-bit strings).
bool interaction_predicate(const Antibody& a, const Antibody& b);

// Symmetric, zero diagonal, entries in [-1, 1].
class AffinityMatrix {
 public:
  explicit AffinityMatrix(std::size_t n = 0) : n_(n), j_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t k) const { return j_[i * n_ + k]; }
  void set(std::size_t i, std::size_t k, double value);

 private:
  std::size_t n_;
  std::vector<double> j_;
};

// h_i = S + sum_k J[i][k] c[k]. Throws DimensionMismatch.
double field(std::size_t i, const AffinityMatrix& J, const std::vector<double>& c, double S);

// One threshold update of the antibody concentrations. c_i becomes 0 when
// h_i <= 0; otherwise 1, raised by the stimulation J+ . c of any antigen
// present. Antigen entries are copied unchanged. `order` empty means
// synchronous; otherwise antibodies are updated in place in that order.
std::vector<double> update_concentrations(const AffinityMatrix& J, const std::vector<double>& c,
                                          const std::vector<bool>& is_antigen, double S,
                                          const std::vector<std::size_t>& order = {});

struct StepParams {
  double S = 0.0;
  double rho = 0.2;
  double v_max = 1.0;
  double clearance = 0.05;  // antigen fraction removed per unit of bound antibody per tick
  bool asynchronous = false;
};

// Threshold update, antigen clearance, then volume relaxation
// v <- (1 - rho) v + rho V_max c. A volume within 1e-3 V_max of its target
// snaps onto it. `rng` is only used in asynchronous mode.
void step(std::vector<Antibody>& pop, const AffinityMatrix& J, const StepParams& p, std::mt19937_64& rng);

// Edge (j, k) of weight d(j,k) v_j v_k / sum_l v_l for every interacting
// pair with both volumes positive; vertices are the clones with volume > 0.
// Throws ZeroTotalVolume.
WeightedGraph coexistence_graph(const std::vector<Antibody>& pop);

struct Injection {
  Tick tick;
  double dose = 1.0;
};

struct SimConfig {
  std::size_t repertoire = 50;
  unsigned bit_width = 12;
  Tick ticks = 200;
  Tick stride = 5;
  std::uint64_t seed = 1;
  std::vector<Injection> injections{{40, 1.0}, {120, 1.0}};
  StepParams step;

  // Memory core: germline g, its complement, and single-bit mutants of both.
  std::uint32_t germline = 256;
  std::vector<unsigned> mutations{6, 2};
  // Cross-reactive clones ~g^e_j for bits outside `mutations`: they bind the
  // antigen and g but have no partner of their own. -1 means all of them.
  int responders = -1;
  // An unrelated complementary pair active from the start.
  std::uint32_t bystander = 240;
  std::pair<double, double> j_range{-1.0, 1.0};
  std::pair<double, double> core_j_range{0.1, 1.0};
  std::pair<double, double> antigen_j_range{0.5, 1.0};

  void validate() const;
};

SimConfig sim_config_from_json(const nlohmann::json& j);
// `key=value` lines; lists are comma separated.
SimConfig sim_config_from_text(const std::string& text);
SimConfig load_sim_config(const std::string& path);
nlohmann::json sim_config_to_json(const SimConfig& c);

struct Simulation {
  std::vector<Antibody> population;
  AffinityMatrix J;
};

// Repertoire and couplings for a config; deterministic in the seed.
Simulation initialise(const SimConfig& config);

// Observations at tick 0 and every `stride` ticks up to `ticks`.
ObservationSeries run(const SimConfig& config);

}  // namespace sbtk
