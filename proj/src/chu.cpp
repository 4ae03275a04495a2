#include "sbtk/chu.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sbtk/error.hpp"
#include "sbtk/format.hpp"

using nlohmann::json;

namespace sbtk {

std::string to_string(const ActionLabel& a, const std::map<VertexId, std::string>& names) {
  auto label = [&](VertexId v) {
    auto it = names.find(v);
    return it == names.end() ? std::to_string(v) : it->second;
  };
  return "(" + a.action + ", " + label(a.source) + ", " + label(a.target) + ")";
}

std::string state_to_string(const ChuState& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += static_cast<char>('0' + s[i]);
  }
  return out + ")";
}

ChuSpace make_chu(std::vector<ActionLabel> actions, std::vector<ChuState> states) {
  for (const auto& s : states) {
    if (s.size() != actions.size()) {
      throw DimensionMismatch("state of length " + std::to_string(s.size()) + " for " +
                              std::to_string(actions.size()) + " actions");
    }
    for (auto x : s) {
      if (x > 2) throw DataError("Chu entries must lie in {0,1,2}");
    }
  }
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return {std::move(actions), std::move(states)};
}

std::vector<ActionLabel> actions_from_generators(const Barcode& b, const std::vector<std::string>& names,
                                                 bool bidirectional) {
  if (names.empty()) throw ConfigError("no action names given");
  std::vector<ActionLabel> out;
  std::set<ActionLabel> seen;
  auto emit = [&](VertexId from, VertexId to) {
    for (const auto& n : names) {
      ActionLabel a{n, from, to};
      if (seen.insert(a).second) out.push_back(a);
    }
  };
  for (const auto& iv : b.intervals) {
    if (iv.dimension <= 0 || !iv.persistent()) continue;
    for (const auto& sigma : iv.generator) {
      const auto& vs = sigma.vertices;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
          emit(vs[i], vs[j]);
          if (bidirectional) emit(vs[j], vs[i]);
        }
      }
    }
  }
  if (out.empty()) throw NoGenerators("barcode has no persistent generator of dimension > 0");
  return out;
}

ChuSpace full_chu(const std::vector<ActionLabel>& actions) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    total *= 3;
    if (total > kMaxChuStates) {
      throw StateSpaceTooLarge(std::to_string(actions.size()) + " actions exceed the 3^16 state guard");
    }
  }
  std::vector<ChuState> states;
  states.reserve(total);
  ChuState s(actions.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    states.push_back(s);
    // Odometer with the last coordinate fastest keeps lexicographic order.
    for (std::size_t i = s.size(); i-- > 0;) {
      if (++s[i] < 3) break;
      s[i] = 0;
    }
  }
  return {actions, std::move(states)};
}

ChuSpace constrain(const ChuSpace& c, const MutexPairs& mutex) {
  for (const auto& [i, j] : mutex) {
    if (i >= c.actions.size() || j >= c.actions.size()) {
      throw ConfigError("mutex pair (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    }
  }
  ChuSpace out{c.actions, {}};
  for (const auto& s : c.states) {
    bool keep = std::all_of(mutex.begin(), mutex.end(),
                            [&](const auto& p) { return std::min(s[p.first], s[p.second]) == 0; });
    if (keep) out.states.push_back(s);
  }
  return out;
}

MutexPairs mutex_pairs_by_name(const std::vector<ActionLabel>& actions,
                               const std::vector<std::pair<std::string, std::string>>& rules) {
  auto ruled = [&](const std::string& a, const std::string& b) {
    return std::any_of(rules.begin(), rules.end(), [&](const auto& r) {
      return (r.first == a && r.second == b) || (r.first == b && r.second == a);
    });
  };
  MutexPairs out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    for (std::size_t j = i + 1; j < actions.size(); ++j) {
      const auto& x = actions[i];
      const auto& y = actions[j];
      if (x.source == y.source && x.target == y.target && ruled(x.action, y.action)) out.emplace_back(i, j);
    }
  }
  return out;
}

ChuSpace parallel(const ChuSpace& a, const ChuSpace& b) {
  std::set<ActionLabel> left(a.actions.begin(), a.actions.end());
  for (const auto& x : b.actions) {
    if (left.count(x)) throw LabelClash(to_string(x) + " appears in both components");
  }
  if (!a.states.empty() && b.states.size() > kMaxChuStates / a.states.size()) {
    throw StateSpaceTooLarge("product of " + std::to_string(a.size()) + " and " + std::to_string(b.size()) +
                             " states");
  }
  ChuSpace out;
  out.actions = a.actions;
  out.actions.insert(out.actions.end(), b.actions.begin(), b.actions.end());
  out.states.reserve(a.size() * b.size());
  // Both inputs are sorted, so the nested product is already lexicographic.
  for (const auto& s : a.states) {
    for (const auto& t : b.states) {
      ChuState st = s;
      st.insert(st.end(), t.begin(), t.end());
      out.states.push_back(std::move(st));
    }
  }
  return out;
}

std::vector<std::size_t> HasseDiagram::minimal() const {
  std::vector<bool> has_in(nodes.size(), false);
  for (const auto& e : edges) has_in[e.second] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!has_in[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> HasseDiagram::maximal() const {
  std::vector<bool> has_out(nodes.size(), false);
  for (const auto& e : edges) has_out[e.first] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!has_out[i]) out.push_back(i);
  }
  return out;
}

HasseDiagram hasse(const ChuSpace& c) {
  HasseDiagram h{c.states, {}};
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    ChuState up = c.states[i];
    for (std::size_t k = 0; k < up.size(); ++k) {
      if (up[k] == 2) continue;
      ++up[k];
      auto it = std::lower_bound(c.states.begin(), c.states.end(), up);
      if (it != c.states.end() && *it == up) h.edges.emplace_back(i, static_cast<std::size_t>(it - c.states.begin()));
      --up[k];
    }
  }
  std::sort(h.edges.begin(), h.edges.end());
  return h;
}

std::vector<std::size_t> match_columns(const ChuSpace& c, const std::vector<ChuState>& reference) {
  if (reference.size() != c.states.size()) {
    throw DimensionMismatch("reference has " + std::to_string(reference.size()) + " columns, space has " +
                            std::to_string(c.states.size()));
  }
  std::vector<std::size_t> perm;
  std::vector<bool> used(c.states.size(), false);
  for (const auto& col : reference) {
    auto it = std::lower_bound(c.states.begin(), c.states.end(), col);
    if (it == c.states.end() || *it != col) throw DimensionMismatch("state " + state_to_string(col) + " not in space");
    auto idx = static_cast<std::size_t>(it - c.states.begin());
    if (used[idx]) throw DimensionMismatch("state " + state_to_string(col) + " listed twice");
    used[idx] = true;
    perm.push_back(idx);
  }
  return perm;
}

std::vector<CoupledPair> hda_from_barcode(const Barcode& b, const HdaOptions& opts) {
  const auto labels = actions_from_generators(b, opts.action_names, opts.bidirectional);
  std::set<std::pair<VertexId, VertexId>> pairs;
  for (const auto& a : labels) pairs.emplace(std::min(a.source, a.target), std::max(a.source, a.target));

  auto agent = [&](VertexId from, VertexId to) {
    std::vector<ActionLabel> acts;
    for (const auto& n : opts.action_names) acts.push_back({n, from, to});
    return constrain(full_chu(acts), mutex_pairs_by_name(acts, opts.mutex_rules));
  };
  std::vector<CoupledPair> out;
  for (const auto& [u, v] : pairs) {
    ChuSpace space = agent(u, v);
    if (opts.bidirectional) space = parallel(space, agent(v, u));
    out.push_back({u, v, std::move(space)});
  }
  return out;
}

HdaOptions hda_options_from_json(const json& actions, const json& mutex) {
  HdaOptions o;
  try {
    if (actions.is_array()) {
      o.action_names = actions.get<std::vector<std::string>>();
    } else {
      o.action_names = actions.at("actions").get<std::vector<std::string>>();
      o.bidirectional = actions.value("bidirectional", true);
    }
    if (!mutex.is_null()) {
      const json& rules = mutex.is_object() ? mutex.at("mutex") : mutex;
      for (const auto& r : rules) {
        if (!r.is_array() || r.size() != 2) throw ParseError("mutex rule must name two actions");
        o.mutex_rules.emplace_back(r[0].get<std::string>(), r[1].get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("HDA options: ") + e.what());
  }
  if (o.action_names.empty()) throw ConfigError("no action names given");
  return o;
}

std::string format_chu_csv(const ChuSpace& c) {
  std::string out = "action,source,target";
  for (std::size_t k = 0; k < c.states.size(); ++k) out += ",s" + std::to_string(k + 1);
  out += "\n";
  for (std::size_t i = 0; i < c.actions.size(); ++i) {
    const auto& a = c.actions[i];
    out += a.action + "," + std::to_string(a.source) + "," + std::to_string(a.target);
    for (const auto& s : c.states) {
      out += ",";
      out += static_cast<char>('0' + s[i]);
    }
    out += "\n";
  }
  return out;
}

ChuSpace parse_chu_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ActionLabel> actions;
  std::vector<std::vector<std::uint8_t>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (std::size_t pos; (pos = t.find(',', start)) != std::string_view::npos; start = pos + 1) {
      cells.push_back(t.substr(start, pos - start));
    }
    cells.push_back(t.substr(start));
    if (cells.size() < 3) throw ParseError("Chu CSV row needs action,source,target");
    ActionLabel a{std::string(trim(cells[0])), 0, 0};
    if (!parse_int(trim(cells[1]), a.source) || !parse_int(trim(cells[2]), a.target)) {
      throw ParseError("Chu CSV row for '" + a.action + "' has a bad vertex id");
    }
    std::vector<std::uint8_t> row;
    for (std::size_t k = 3; k < cells.size(); ++k) {
      int x = 0;
      if (!parse_int(trim(cells[k]), x) || x < 0 || x > 2) throw ParseError("Chu entry outside {0,1,2}");
      row.push_back(static_cast<std::uint8_t>(x));
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged Chu CSV");
    actions.push_back(std::move(a));
    rows.push_back(std::move(row));
  }
  std::vector<ChuState> states(rows.empty() ? 0 : rows.front().size(), ChuState(actions.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) states[k][i] = rows[i][k];
  }
  return make_chu(std::move(actions), std::move(states));
}

std::string hasse_to_dot(const HasseDiagram& h, const std::string& title) {
  std::string out = "digraph \"" + title + "\" {\n  rankdir=BT;\n  node [shape=plaintext];\n";
  std::map<int, std::vector<std::size_t>> ranks;
  for (std::size_t i = 0; i < h.nodes.size(); ++i) {
    int sum = 0;
    for (auto x : h.nodes[i]) sum += x;
    ranks[sum].push_back(i);
    out += "  n" + std::to_string(i) + " [label=\"" + state_to_string(h.nodes[i]) + "\"];\n";
  }
  for (const auto& [rank, ids] : ranks) {
    out += "  { rank=same;";
    for (auto i : ids) out += " n" + std::to_string(i) + ";";
    out += " }  // rank " + std::to_string(rank) + "\n";
  }
  for (const auto& [a, b] : h.edges) out += "  n" + std::to_string(a) + " -> n" + std::to_string(b) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace sbtk
