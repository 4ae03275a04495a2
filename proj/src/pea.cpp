#include "sbtk/pea.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sbtk/error.hpp"
#include "sbtk/format.hpp"

using nlohmann::json;

namespace sbtk {

std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::plateau: return "plateau";
    case SegmentKind::peak: return "peak";
    case SegmentKind::rising: return "rising";
    case SegmentKind::falling: return "falling";
  }
  return "?";
}

SegmentParams SegmentParams::defaults_for(const EntropySeries& s) {
  const double top = s.max_h();
  if (!(top > 0.0)) return {1e-9, 5, 1e-9};
  return {0.05 * top, 5, 0.25 * top};
}

namespace {

double arriving_slope(const EntropySeries& s, std::size_t k) {
  if (s.d1.empty()) return 0.0;
  return k == 0 ? s.d1[0] : s.d1[k - 1];
}

// Interior local maximum. A run of equal values counts once, at its first
// sample, provided it is shorter than a plateau and a lower value follows.
bool is_local_max(const std::vector<EntropyPoint>& p, std::size_t k, std::size_t window) {
  if (k == 0 || k + 1 >= p.size()) return false;
  if (!(p[k].h > p[k - 1].h)) return false;
  std::size_t r = k + 1;
  while (r < p.size() && p[r].h == p[k].h) ++r;
  return r - k < window && r < p.size() && p[r].h < p[k].h;
}

double peak_prominence(const std::vector<EntropyPoint>& p, std::size_t k) {
  const double top = p[k].h;
  struct Flank {
    bool higher = false;
    double low = 0.0;
  };
  // Lowest point between the peak and the first higher sample (or the end).
  auto scan = [&](long step) {
    Flank f;
    f.low = top;
    for (long i = static_cast<long>(k) + step; i >= 0 && i < static_cast<long>(p.size()); i += step) {
      if (p[i].h > top) {
        f.higher = true;
        break;
      }
      f.low = std::min(f.low, p[i].h);
    }
    return f;
  };
  const Flank left = scan(-1);
  const Flank right = scan(+1);
  if (left.higher || right.higher) return top - std::max(left.low, right.low);
  return top - std::min(left.low, right.low);
}

Segment make_segment(const EntropySeries& s, SegmentKind kind, std::size_t first, std::size_t last) {
  Segment seg{kind, first, last, s.points[first].tick, s.points[last].tick, 0.0, 0.0, {}};
  double sum = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    seg.evidence.push_back({s.points[k].tick, s.points[k].h, arriving_slope(s, k)});
    sum += s.points[k].h;
  }
  seg.mean_h = sum / static_cast<double>(last - first + 1);
  return seg;
}

}  // namespace

std::vector<Segment> segment(const EntropySeries& s, const SegmentParams& params) {
  if (!(params.eps > 0.0)) throw ConfigError("eps must be positive");
  if (params.window == 0) throw ConfigError("window must be at least 1");
  const auto& p = s.points;
  const std::size_t n = p.size();
  if (n < params.window) {
    throw SeriesTooShort(std::to_string(n) + " samples, window is " + std::to_string(params.window));
  }

  std::vector<bool> peak(n, false);
  std::vector<double> prom(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!is_local_max(p, k, params.window)) continue;
    prom[k] = peak_prominence(p, k);
    peak[k] = prom[k] >= params.prominence;
  }

  std::vector<SegmentKind> kind(n, SegmentKind::rising);
  std::vector<bool> assigned(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (peak[k]) {
      kind[k] = SegmentKind::peak;
      assigned[k] = true;
    }
  }
  for (std::size_t k = 0; k < n;) {
    if (peak[k] || !(std::abs(arriving_slope(s, k)) < params.eps)) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e + 1 < n && !peak[e + 1] && std::abs(arriving_slope(s, e + 1)) < params.eps) ++e;
    if (e - k + 1 >= params.window) {
      for (std::size_t i = k; i <= e; ++i) {
        kind[i] = SegmentKind::plateau;
        assigned[i] = true;
      }
    }
    k = e + 1;
  }
  // Remaining samples follow the direction toward the next sample, or the
  // one they arrived from when the next step is level.
  int last_dir = +1;
  for (std::size_t k = 0; k < n; ++k) {
    if (assigned[k]) continue;
    double diff = k + 1 < n ? p[k + 1].h - p[k].h : 0.0;
    if (diff == 0.0 && k > 0) diff = p[k].h - p[k - 1].h;
    int dir = diff > 0.0 ? +1 : diff < 0.0 ? -1 : last_dir;
    kind[k] = dir > 0 ? SegmentKind::rising : SegmentKind::falling;
    last_dir = dir;
  }

  std::vector<Segment> out;
  for (std::size_t k = 0; k < n;) {
    std::size_t e = k;
    if (kind[k] != SegmentKind::peak) {
      while (e + 1 < n && kind[e + 1] == kind[k]) ++e;
    }
    out.push_back(make_segment(s, kind[k], k, e));
    if (kind[k] == SegmentKind::peak) out.back().prominence = prom[k];
    k = e + 1;
  }
  return out;
}

bool EntropyInvariant::holds(double h, double dh) const {
  return h >= h_min && h <= h_max && std::abs(dh) < slope_tol;
}

std::string EntropyInvariant::describe() const {
  std::string band = h_min == 0.0 && h_max == 0.0
                         ? "H = 0"
                         : (h_min == h_max ? "H = " + format_fixed(h_min, 3)
                                           : "H in [" + format_fixed(h_min, 3) + ", " + format_fixed(h_max, 3) + "]");
  if (h_min > 0.0) band += " (H > 0)";
  return band + ", |dH| < " + format_fixed(slope_tol, 3);
}

std::vector<std::string> Pea::labels() const {
  std::set<std::string> unique;
  for (const auto& t : transitions) unique.insert(t.label);
  return {unique.begin(), unique.end()};
}

std::optional<std::size_t> Pea::find_state(const std::string& name) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Pea::state_for(double h, double dh) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].invariant.holds(h, dh)) return i;
  }
  return std::nullopt;
}

namespace {

struct Level {
  std::vector<std::size_t> plateaus;
  double sum = 0.0;
  std::size_t count = 0;
  double lo = INFINITY;
  double hi = -INFINITY;
  std::size_t first_seen = 0;

  double mean() const { return sum / static_cast<double>(count); }
};

bool mergeable(const Level& a, const Level& b, double eps) {
  return std::abs(a.mean() - b.mean()) < eps || (a.lo <= b.hi && b.lo <= a.hi);
}

}  // namespace

Pea build_pea(const std::vector<Segment>& segments, double eps, const std::vector<ExtraTransition>& extra,
              const PeaNaming& naming) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  std::vector<Level> levels;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].kind != SegmentKind::plateau) continue;
    Level lv;
    lv.plateaus.push_back(i);
    lv.first_seen = i;
    for (const auto& e : segments[i].evidence) {
      lv.sum += e.h;
      ++lv.count;
      lv.lo = std::min(lv.lo, e.h);
      lv.hi = std::max(lv.hi, e.h);
    }
    levels.push_back(std::move(lv));
  }
  if (levels.empty()) throw NoPlateaus("no steady state in the series");
  if (segments.front().kind != SegmentKind::plateau) {
    throw InitialNotSteady("series starts with a " + to_string(segments.front().kind) + " segment");
  }

  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t a = 0; a < levels.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < levels.size() && !merged; ++b) {
        if (!mergeable(levels[a], levels[b], eps)) continue;
        auto& x = levels[a];
        auto& y = levels[b];
        x.plateaus.insert(x.plateaus.end(), y.plateaus.begin(), y.plateaus.end());
        x.sum += y.sum;
        x.count += y.count;
        x.lo = std::min(x.lo, y.lo);
        x.hi = std::max(x.hi, y.hi);
        x.first_seen = std::min(x.first_seen, y.first_seen);
        levels.erase(levels.begin() + static_cast<long>(b));
        merged = true;
      }
    }
  }
  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.first_seen < b.first_seen; });

  Pea pea;
  std::vector<std::size_t> state_of_segment(segments.size(), 0);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    auto& lv = levels[i];
    std::sort(lv.plateaus.begin(), lv.plateaus.end());
    std::string name = "r" + std::to_string(i);
    if (auto it = naming.states.find(name); it != naming.states.end()) name = it->second;
    pea.states.push_back({name, {lv.lo, lv.hi, eps, lv.mean()}, lv.plateaus});
    for (std::size_t seg : lv.plateaus) state_of_segment[seg] = i;
  }
  pea.initial = state_of_segment[0];

  auto rename_label = [&](const std::string& label) {
    auto it = naming.labels.find(label);
    return it == naming.labels.end() ? label : it->second;
  };
  auto add = [&](PeaTransition t) {
    if (std::find(pea.transitions.begin(), pea.transitions.end(), t) == pea.transitions.end()) {
      pea.transitions.push_back(std::move(t));
    }
  };

  std::size_t current = pea.initial;
  std::vector<std::string> pending;
  std::optional<Tick> excursion_start;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    if (seg.kind == SegmentKind::plateau) {
      const std::size_t next = state_of_segment[i];
      if (!pending.empty()) {
        std::string label;
        for (const auto& pk : pending) label += (label.empty() ? "" : "+") + pk;
        add({current, rename_label(label), next, true});
      } else if (next != current) {
        add({current, rename_label("shift@" + std::to_string(excursion_start.value_or(seg.first_tick))), next, true});
      }
      current = next;
      pending.clear();
      excursion_start.reset();
      continue;
    }
    if (!excursion_start) excursion_start = seg.first_tick;
    if (seg.kind == SegmentKind::peak) pending.push_back("peak@" + std::to_string(seg.first_tick));
  }
  for (const auto& pk : pending) pea.unresolved_peaks.push_back(pk);

  for (const auto& x : extra) {
    auto from = pea.find_state(x.from);
    auto to = pea.find_state(x.to);
    if (!from) throw UnknownState("extra transition refers to '" + x.from + "'");
    if (!to) throw UnknownState("extra transition refers to '" + x.to + "'");
    add({*from, x.label, *to, false});
  }
  return pea;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string pea_to_dot(const Pea& pea) {
  std::string out = "digraph PEA {\n  rankdir=LR;\n  node [shape=ellipse];\n";
  out += "  __start [shape=point];\n";
  for (std::size_t i = 0; i < pea.states.size(); ++i) {
    const auto& st = pea.states[i];
    out += "  s" + std::to_string(i) + " [label=\"" + dot_escape(st.name) + "\\n" +
           dot_escape(st.invariant.describe()) + "\"];\n";
  }
  out += "  __start -> s" + std::to_string(pea.initial) + ";\n";
  for (const auto& t : pea.transitions) {
    out += "  s" + std::to_string(t.from) + " -> s" + std::to_string(t.to) + " [label=\"" + dot_escape(t.label) +
           "\"" + (t.from_data ? "" : ", style=dashed") + "];\n";
  }
  out += "}\n";
  return out;
}

json pea_to_json(const Pea& pea) {
  json states = json::array();
  for (const auto& st : pea.states) {
    states.push_back({{"name", st.name},
                      {"invariant",
                       {{"h_min", st.invariant.h_min},
                        {"h_max", st.invariant.h_max},
                        {"slope_tol", st.invariant.slope_tol},
                        {"level", st.invariant.level},
                        {"text", st.invariant.describe()}}},
                      {"plateau_segments", st.plateaus}});
  }
  json transitions = json::array();
  for (const auto& t : pea.transitions) {
    transitions.push_back({{"from", pea.states[t.from].name},
                           {"label", t.label},
                           {"to", pea.states[t.to].name},
                           {"from_data", t.from_data}});
  }
  return {{"states", states},
          {"initial", pea.states.at(pea.initial).name},
          {"labels", pea.labels()},
          {"transitions", transitions},
          {"unresolved_peaks", pea.unresolved_peaks}};
}

json segments_to_json(const std::vector<Segment>& segments) {
  json out = json::array();
  for (const auto& s : segments) {
    json e = {{"kind", to_string(s.kind)},
              {"first_tick", s.first_tick},
              {"last_tick", s.last_tick},
              {"mean_h", s.mean_h}};
    if (s.kind == SegmentKind::peak) e["prominence"] = s.prominence;
    out.push_back(e);
  }
  return out;
}

std::vector<ExtraTransition> extra_transitions_from_json(const json& j) {
  std::vector<ExtraTransition> out;
  try {
    for (const auto& t : j) {
      out.push_back({t.at("from").get<std::string>(), t.at("label").get<std::string>(), t.at("to").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("extra transitions: ") + e.what());
  }
  return out;
}

PeaNaming naming_from_json(const json& j) {
  PeaNaming n;
  try {
    if (j.contains("states")) n.states = j["states"].get<std::map<std::string, std::string>>();
    if (j.contains("labels")) n.labels = j["labels"].get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("naming file: ") + e.what());
  }
  return n;
}

}  // namespace sbtk
