#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sbtk/persistence.hpp"

namespace sbtk {

struct ActionLabel {
  std::string action;
  VertexId source;
  VertexId target;

  auto operator<=>(const ActionLabel&) const = default;
};

std::string to_string(const ActionLabel& a, const std::map<VertexId, std::string>& names = {});

// 0 = unstarted, 1 = executing, 2 = finished.
using ChuState = std::vector<std::uint8_t>;

// Extensional Chu space over {0,1,2}: states kept distinct and in
// lexicographic order.
struct ChuSpace {
  std::vector<ActionLabel> actions;
  std::vector<ChuState> states;

  std::size_t size() const { return states.size(); }
  std::uint8_t r(std::size_t action, std::size_t state) const { return states[state][action]; }
};

inline constexpr std::size_t kMaxChuStates = 43046721;  // 3^16

ChuSpace make_chu(std::vector<ActionLabel> actions, std::vector<ChuState> states);

// Labels (name, v, v') for every vertex pair of every dim > 0 generator of a
// persistent interval; with `bidirectional`, the reverse direction follows
// each forward block. Duplicates keep their first position.
std::vector<ActionLabel> actions_from_generators(const Barcode& b, const std::vector<std::string>& names,
                                                 bool bidirectional);

ChuSpace full_chu(const std::vector<ActionLabel>& actions);

using MutexPairs = std::vector<std::pair<std::size_t, std::size_t>>;

// Keep s iff min(s[i], s[j]) = 0 for every mutex pair (i, j).
ChuSpace constrain(const ChuSpace& c, const MutexPairs& mutex);

// Index pairs of actions sharing source and target whose names form one of
// the rules, e.g. {"elicits", "reduces"}.
MutexPairs mutex_pairs_by_name(const std::vector<ActionLabel>& actions,
                               const std::vector<std::pair<std::string, std::string>>& rules);

ChuSpace parallel(const ChuSpace& a, const ChuSpace& b);

struct HasseDiagram {
  std::vector<ChuState> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // covering s -> s'

  std::vector<std::size_t> minimal() const;
  std::vector<std::size_t> maximal() const;
};

HasseDiagram hasse(const ChuSpace& c);

// Position in `c.states` of each reference column, or throws
// DimensionMismatch when the state sets differ.
std::vector<std::size_t> match_columns(const ChuSpace& c, const std::vector<ChuState>& reference);

// One coupled pair {u, v} of agents and their composed behaviour.
struct CoupledPair {
  VertexId u;
  VertexId v;
  ChuSpace space;
};

struct HdaOptions {
  std::vector<std::string> action_names;
  bool bidirectional = true;
  std::vector<std::pair<std::string, std::string>> mutex_rules;
};

// For every vertex pair {u, v} found in a persistent generator: agent u's
// actions toward v in parallel with agent v's actions toward u, each
// constrained by the mutex rules. Pairs come in (u, v) order.
std::vector<CoupledPair> hda_from_barcode(const Barcode& b, const HdaOptions& opts);

HdaOptions hda_options_from_json(const nlohmann::json& actions, const nlohmann::json& mutex);

// Rows = actions, columns = states: `action,source,target,s1,...`.
std::string format_chu_csv(const ChuSpace& c);
ChuSpace parse_chu_csv(const std::string& text);

// Bottom-to-top DOT, nodes ranked by coordinate sum.
std::string hasse_to_dot(const HasseDiagram& h, const std::string& title = "hasse");

std::string state_to_string(const ChuState& s);

}  // namespace sbtk
