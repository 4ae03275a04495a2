#include "sbtk/immune.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include "sbtk/error.hpp"
#include "sbtk/format.hpp"
#include "sbtk/numeric.hpp"

using nlohmann::json;

namespace sbtk {

unsigned hamming(const Bitstring& a, const Bitstring& b) {
  if (a.width != b.width) {
    throw WidthMismatch(std::to_string(a.width) + " vs " + std::to_string(b.width) + " bits");
  }
  return static_cast<unsigned>(std::popcount((a.value ^ b.value) & a.mask()));
}

bool interaction_predicate(const Antibody& a, const Antibody& b) {
  const unsigned d = hamming(a.bits, b.bits);
  return d + 1 >= a.bits.width && d <= a.bits.width;
}

void AffinityMatrix::set(std::size_t i, std::size_t k, double value) {
  if (i >= n_ || k >= n_) throw DimensionMismatch("affinity index out of range");
  if (i == k) throw InvariantViolation("affinity diagonal must stay zero");
  if (!(std::abs(value) <= 1.0)) throw ConfigError("affinity " + format_double(value) + " outside [-1, 1]");
  j_[i * n_ + k] = value;
  j_[k * n_ + i] = value;
}

double field(std::size_t i, const AffinityMatrix& J, const std::vector<double>& c, double S) {
  if (c.size() != J.size()) {
    throw DimensionMismatch(std::to_string(c.size()) + " concentrations for a " + std::to_string(J.size()) +
                            "-clone matrix");
  }
  if (i >= J.size()) throw DimensionMismatch("clone index out of range");
  double h = S;
  for (std::size_t k = 0; k < c.size(); ++k) h += J(i, k) * c[k];
  return h;
}

std::vector<double> update_concentrations(const AffinityMatrix& J, const std::vector<double>& c,
                                          const std::vector<bool>& is_antigen, double S,
                                          const std::vector<std::size_t>& order) {
  if (is_antigen.size() != c.size()) throw DimensionMismatch("antigen mask length");
  auto next = [&](std::size_t i, const std::vector<double>& cur) {
    if (!(field(i, J, cur, S) > 0.0)) return 0.0;
    double stim = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (is_antigen[k]) stim += std::max(0.0, J(i, k)) * cur[k];
    }
    return 1.0 + stim;
  };
  if (order.empty()) {
    std::vector<double> out = c;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!is_antigen[i]) out[i] = next(i, c);
    }
    return out;
  }
  std::vector<double> cur = c;
  for (std::size_t i : order) {
    if (i >= cur.size()) throw DimensionMismatch("update order index out of range");
    if (!is_antigen[i]) cur[i] = next(i, cur);
  }
  return cur;
}

void step(std::vector<Antibody>& pop, const AffinityMatrix& J, const StepParams& p, std::mt19937_64& rng) {
  std::vector<double> c;
  std::vector<bool> is_antigen;
  for (const auto& a : pop) {
    c.push_back(a.c);
    is_antigen.push_back(a.antigen);
  }
  std::vector<std::size_t> order;
  if (p.asynchronous) {
    order.resize(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Fisher-Yates with raw draws keeps the sequence independent of the
    // standard library's distribution implementations.
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  }
  c = update_concentrations(J, c, is_antigen, p.S, order);

  for (std::size_t a = 0; a < pop.size(); ++a) {
    if (!is_antigen[a] || c[a] == 0.0) continue;
    double bound = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (!is_antigen[i]) bound += std::max(0.0, J(i, a)) * c[i];
    }
    c[a] *= std::max(0.0, 1.0 - p.clearance * bound);
    if (c[a] < 1e-3) c[a] = 0.0;
  }

  for (std::size_t i = 0; i < pop.size(); ++i) {
    auto& x = pop[i];
    x.c = c[i];
    const double target = p.v_max * x.c;
    x.volume = (1.0 - p.rho) * x.volume + p.rho * target;
    if (std::abs(x.volume - target) < 1e-3 * p.v_max) x.volume = target;
  }
}

WeightedGraph coexistence_graph(const std::vector<Antibody>& pop) {
  CompensatedSum sum;
  for (const auto& a : pop) sum.add(a.volume);
  const double total = sum.value();
  if (!(total > 0.0)) throw ZeroTotalVolume("no clone has positive volume");
  WeightedGraph g;
  for (const auto& a : pop) {
    if (a.volume > 0.0) g.add_vertex(a.id);
  }
  for (std::size_t j = 0; j < pop.size(); ++j) {
    const auto& x = pop[j];
    if (!(x.volume > 0.0)) continue;
    for (std::size_t k = j + 1; k < pop.size(); ++k) {
      const auto& y = pop[k];
      if (!(y.volume > 0.0) || (x.antigen && y.antigen) || !interaction_predicate(x, y)) continue;
      const double d = hamming(x.bits, y.bits);
      g.add_edge(x.id, y.id, d * x.volume * y.volume / total);
    }
  }
  return g;
}

namespace {

void check_range(const std::pair<double, double>& r, const char* name) {
  if (!(r.first >= -1.0 && r.second <= 1.0 && r.first <= r.second)) {
    throw ConfigError(std::string(name) + " must satisfy -1 <= lo <= hi <= 1");
  }
}

struct CoreBits {
  std::vector<std::uint32_t> core;  // memory core plus the bystander pair
  std::vector<std::uint32_t> responders;
  std::uint32_t antigen;
};

CoreBits core_bits(const SimConfig& cfg) {
  const Bitstring g{cfg.germline, cfg.bit_width};
  CoreBits out{{g.value, g.complement().value}, {}, g.value};
  for (unsigned m : cfg.mutations) {
    out.core.push_back(g.flip(m).value);
    out.core.push_back(g.flip(m).complement().value);
  }
  for (unsigned bit = 0; bit < cfg.bit_width; ++bit) {
    if (cfg.responders >= 0 && out.responders.size() >= static_cast<std::size_t>(cfg.responders)) break;
    if (std::find(cfg.mutations.begin(), cfg.mutations.end(), bit) != cfg.mutations.end()) continue;
    out.responders.push_back(g.complement().flip(bit).value);
  }
  const Bitstring b{cfg.bystander, cfg.bit_width};
  out.core.push_back(b.value);
  out.core.push_back(b.complement().value);
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (bit_width < 2 || bit_width > 24) throw ConfigError("bit_width must lie in [2, 24]");
  const std::uint64_t space = std::uint64_t{1} << bit_width;
  if (germline >= space || bystander >= space) throw ConfigError("germline/bystander do not fit in bit_width");
  for (unsigned m : mutations) {
    if (m >= bit_width) throw ConfigError("mutation bit " + std::to_string(m) + " outside the string");
  }
  const auto bits = core_bits(*this);
  auto core = bits.core;
  core.insert(core.end(), bits.responders.begin(), bits.responders.end());
  if (std::set<std::uint32_t>(core.begin(), core.end()).size() != core.size()) {
    throw ConfigError("germline, mutants, responders and bystander pair must be distinct clones");
  }
  if (repertoire < core.size() || repertoire > space) {
    throw ConfigError("repertoire must lie in [" + std::to_string(core.size()) + ", " + std::to_string(space) + "]");
  }
  if (ticks < 1) throw ConfigError("ticks must be positive");
  if (stride < 1) throw ConfigError("stride must be positive");
  for (const auto& inj : injections) {
    if (inj.tick >= ticks) throw ConfigError("injection tick outside [0, ticks)");
    if (!(inj.dose > 0.0)) throw ConfigError("injection dose must be positive");
  }
  if (!(step.rho > 0.0 && step.rho <= 1.0)) throw ConfigError("rho must lie in (0, 1]");
  if (!(step.v_max > 0.0)) throw ConfigError("V_max must be positive");
  if (!(step.clearance >= 0.0)) throw ConfigError("clearance must be non-negative");
  if (!std::isfinite(step.S)) throw ConfigError("S must be finite");
  check_range(j_range, "j_range");
  check_range(core_j_range, "core_j_range");
  check_range(antigen_j_range, "antigen_j_range");
}

SimConfig sim_config_from_json(const json& j) {
  SimConfig c;
  auto range = [&](const char* key, std::pair<double, double>& r) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) throw ConfigError(std::string(key) + " needs two numbers");
    r = {v[0].get<double>(), v[1].get<double>()};
  };
  try {
    if (!j.is_object()) throw ConfigError("simulation config must be an object");
    static const std::set<std::string> known{"repertoire", "bit_width", "ticks", "stride", "seed", "injections",
                                             "dose", "S", "rho", "V_max", "clearance", "async", "germline",
                                             "mutations", "responders", "bystander", "j_range", "core_j_range",
                                             "antigen_j_range"};
    for (const auto& [key, _] : j.items()) {
      if (!known.count(key)) throw ConfigError("unknown key '" + key + "'");
    }
    c.repertoire = j.value("repertoire", c.repertoire);
    c.bit_width = j.value("bit_width", c.bit_width);
    c.ticks = j.value("ticks", c.ticks);
    c.stride = j.value("stride", c.stride);
    c.seed = j.value("seed", c.seed);
    c.step.S = j.value("S", c.step.S);
    c.step.rho = j.value("rho", c.step.rho);
    c.step.v_max = j.value("V_max", c.step.v_max);
    c.step.clearance = j.value("clearance", c.step.clearance);
    c.step.asynchronous = j.value("async", c.step.asynchronous);
    c.germline = j.value("germline", c.germline);
    c.bystander = j.value("bystander", c.bystander);
    c.responders = j.value("responders", c.responders);
    if (j.contains("mutations")) c.mutations = j.at("mutations").get<std::vector<unsigned>>();
    const double dose = j.value("dose", 1.0);
    if (j.contains("injections")) {
      c.injections.clear();
      for (const auto& inj : j.at("injections")) {
        if (inj.is_object()) {
          c.injections.push_back({inj.at("tick").get<Tick>(), inj.value("dose", dose)});
        } else {
          c.injections.push_back({inj.get<Tick>(), dose});
        }
      }
    } else {
      for (auto& inj : c.injections) inj.dose = dose;
    }
    range("j_range", c.j_range);
    range("core_j_range", c.core_j_range);
    range("antigen_j_range", c.antigen_j_range);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

SimConfig sim_config_from_text(const std::string& text) {
  json j = json::object();
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  auto scalar = [](std::string_view v) -> json {
    if (v == "true") return true;
    if (v == "false") return false;
    std::int64_t i = 0;
    if (parse_int(v, i)) return i;
    double d = 0.0;
    if (parse_double(v, d)) return d;
    throw ConfigError("bad value '" + std::string(v) + "'");
  };
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    std::string key(trim(line.substr(0, eq)));
    auto value = trim(line.substr(eq + 1));
    static const std::set<std::string> lists{"injections", "mutations", "j_range", "core_j_range",
                                             "antigen_j_range"};
    if (lists.count(key)) {
      json arr = json::array();
      std::size_t start = 0;
      while (start <= value.size()) {
        auto comma = value.find(',', start);
        auto item = trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) arr.push_back(scalar(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      j[key] = arr;
    } else {
      j[key] = scalar(value);
    }
  }
  return sim_config_from_json(j);
}

SimConfig load_sim_config(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return sim_config_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  return sim_config_from_text(text);
}

json sim_config_to_json(const SimConfig& c) {
  json inj = json::array();
  for (const auto& i : c.injections) inj.push_back({{"tick", i.tick}, {"dose", i.dose}});
  return {{"repertoire", c.repertoire},
          {"bit_width", c.bit_width},
          {"ticks", c.ticks},
          {"stride", c.stride},
          {"seed", c.seed},
          {"injections", inj},
          {"S", c.step.S},
          {"rho", c.step.rho},
          {"V_max", c.step.v_max},
          {"clearance", c.step.clearance},
          {"async", c.step.asynchronous},
          {"germline", c.germline},
          {"mutations", c.mutations},
          {"responders", c.responders},
          {"bystander", c.bystander},
          {"j_range", {c.j_range.first, c.j_range.second}},
          {"core_j_range", {c.core_j_range.first, c.core_j_range.second}},
          {"antigen_j_range", {c.antigen_j_range.first, c.antigen_j_range.second}}};
}

namespace {

double uniform(std::mt19937_64& rng, const std::pair<double, double>& r) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return r.first + (r.second - r.first) * u;
}

}  // namespace

Simulation initialise(const SimConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const auto bits = core_bits(config);
  const std::set<std::uint32_t> core(bits.core.begin(), bits.core.end());
  std::set<std::uint32_t> repertoire = core;
  repertoire.insert(bits.responders.begin(), bits.responders.end());
  const std::uint32_t mask = Bitstring{0, config.bit_width}.mask();
  while (repertoire.size() < config.repertoire) repertoire.insert(static_cast<std::uint32_t>(rng()) & mask);

  Simulation sim;
  for (std::uint32_t v : repertoire) sim.population.push_back({v, {v, config.bit_width}, 0.0, 0.0, false});
  const Bitstring by{config.bystander, config.bit_width};
  for (auto& a : sim.population) {
    if (a.bits.value == by.value || a.bits.value == by.complement().value) {
      a.c = 1.0;
      a.volume = config.step.v_max;
    }
  }
  if (!config.injections.empty()) {
    const VertexId id = VertexId{1} << config.bit_width;
    sim.population.push_back({id, {bits.antigen, config.bit_width}, 0.0, 0.0, true});
  }

  const auto& pop = sim.population;
  sim.J = AffinityMatrix(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (std::size_t k = i + 1; k < pop.size(); ++k) {
      if (!interaction_predicate(pop[i], pop[k])) continue;
      const auto& r = (pop[i].antigen || pop[k].antigen) ? config.antigen_j_range
                      : (core.count(pop[i].bits.value) && core.count(pop[k].bits.value)) ? config.core_j_range
                                                                                         : config.j_range;
      sim.J.set(i, k, uniform(rng, r));
    }
  }
  return sim;
}

ObservationSeries run(const SimConfig& config) {
  Simulation sim = initialise(config);
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  ObservationSeries series;
  auto record = [&](Tick t) {
    WeightedGraph g = coexistence_graph(sim.population);
    for (const auto& a : sim.population) {
      if (g.has_vertex(a.id)) g.set_name(a.id, (a.antigen ? "Ag" : "Ab") + std::to_string(a.bits.value));
    }
    series.append(t, std::move(g));
  };
  // The observation at tick t sees the state before that tick's injection.
  for (Tick t = 0;; ++t) {
    if (t % config.stride == 0) record(t);
    if (t == config.ticks) break;
    for (const auto& inj : config.injections) {
      if (inj.tick != t) continue;
      for (auto& a : sim.population) {
        if (a.antigen) a.c += inj.dose;
      }
    }
    step(sim.population, sim.J, config.step, rng);
  }
  return series;
}

}  // namespace sbtk
