// sbtk: topological pipeline from weighted interaction graphs to entropy
// automata and Chu-space behaviour models.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "sbtk/format.hpp"
#include "sbtk/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sbtk;

namespace {

struct Shared {
  std::string order = "descending";
  int max_dim = 1;
  std::string log_base = "e";
  std::string lengths = "index";
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::optional<std::size_t> window;
  std::optional<double> prominence;
  std::string extra;
  std::string names;
  std::string actions;
  std::string mutex;
};

const CLI::IsMember kOrders({"descending", "ascending", "desc", "asc"});

const CLI::Validator kLogBase(
    [](std::string& v) -> std::string {
      double b = 0.0;
      if (v == "e" || (parse_double(v, b) && b > 1.0 && std::isfinite(b))) return {};
      return "must be 'e' or a number > 1";
    },
    "e|BASE>1");

void add_complex_options(CLI::App* cmd, Shared& s) {
  cmd->add_option("--order", s.order, "Weight ranking: descending (strongest edges first) or ascending")
      ->check(kOrders)
      ->capture_default_str();
  cmd->add_option("--max-dim", s.max_dim, "Highest homology dimension reported")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_entropy_options(CLI::App* cmd, Shared& s) {
  cmd->add_option("--log-base", s.log_base, "Logarithm base, 'e' or a number > 1")
      ->check(kLogBase)
      ->capture_default_str();
  cmd->add_option("--lengths", s.lengths, "Bar lengths in filter indices (index) or ladder weights (weight)")
      ->check(CLI::IsMember({"index", "weight", "real"}))
      ->capture_default_str();
}

void add_segment_options(CLI::App* cmd, Shared& s) {
  cmd->add_option("--eps", s.eps, "Plateau slope tolerance |dH/dt| < eps [default: 0.05*max(H)]")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--window", s.window, "Minimum plateau length in samples [default: 5]")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--prominence", s.prominence, "Minimum peak prominence [default: 0.25*max(H)]")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--extra", s.extra, "JSON list of extra transitions {from,label,to}");
  cmd->add_option("--names", s.names, "JSON renaming {\"states\": {...}, \"labels\": {...}}");
}

void add_hda_options(CLI::App* cmd, Shared& s) {
  cmd->add_option("--actions", s.actions,
                  "JSON action names, a list or {\"actions\": [...], \"bidirectional\": bool} "
                  "[default: elicits, reduces]");
  cmd->add_option("--mutex", s.mutex, "JSON list of mutually exclusive action-name pairs");
}

ComplexOptions complex_options(const Shared& s) {
  if (s.max_dim < 0) throw ConfigError("--max-dim must be non-negative");
  return {parse_weight_order(s.order), s.max_dim};
}

EntropyOptions entropy_options(const Shared& s) {
  EntropyOptions o;
  o.lengths = parse_length_mode(s.lengths);
  if (s.log_base != "e") {
    double b = 0.0;
    if (!parse_double(s.log_base, b) || !(b > 1.0) || !std::isfinite(b)) {
      throw ConfigError("--log-base must be 'e' or a number > 1");
    }
    o.log_base = b;
  }
  return o;
}

SegmentOverrides segment_overrides(const Shared& s) {
  if (s.eps && !(*s.eps > 0.0)) throw ConfigError("--eps must be positive");
  if (s.window && *s.window == 0) throw ConfigError("--window must be at least 1");
  if (s.prominence && !(*s.prominence >= 0.0)) throw ConfigError("--prominence must be non-negative");
  return {s.eps, s.window, s.prominence};
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_file(out, content);
  }
}

SimConfig sim_config(const std::string& path, const Shared& s) {
  SimConfig c = path.empty() ? SimConfig{} : load_sim_config(path);
  if (s.seed) c.seed = *s.seed;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sbtk: persistent homology, entropy automata and Chu spaces for interaction networks"};
  app.require_subcommand(1);
  Shared s;
  std::string input;
  std::string out;
  std::string config;
  std::string plot;
  std::string series;
  bool text = false;

  app.add_option("--jobs", s.jobs, "Worker threads for per-observation stages")->capture_default_str();
  app.add_option("--seed", s.seed, "Simulator seed (overrides the config file)");

  auto* simulate = app.add_subcommand("simulate", "Run the idiotypic network simulator and write a series directory");
  simulate->add_option("config", config, "Simulator config (JSON or key=value); defaults when omitted");
  simulate->add_option("-o,--out", out, "Output directory")->required();

  auto* complex = app.add_subcommand("complex", "Dump the clique-weight-rank filtration of a graph");
  complex->add_option("graph", input, "Edge-list CSV (u,v,weight)")->required();
  complex->add_option("-o,--out", out, "Output file (stdout when omitted)");
  int simplex_dim = 2;
  complex->add_option("--order", s.order, "Weight ranking: descending or ascending")
      ->check(kOrders)
      ->capture_default_str();
  complex->add_option("--max-dim", simplex_dim, "Highest simplex dimension listed")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  auto* homology = app.add_subcommand("homology", "Persistent homology barcode of a graph");
  homology->add_option("graph", input, "Edge-list CSV (u,v,weight)")->required();
  homology->add_option("-o,--out", out, "Output file (stdout when omitted)");
  homology->add_flag("--text", text, "Human-readable barcode instead of JSON");
  add_complex_options(homology, s);

  auto* entropy = app.add_subcommand("entropy", "Persistent entropy chronogram");
  entropy->add_option("input", input, "Series directory, series JSON, barcode JSON or edge-list CSV")->required();
  entropy->add_option("-o,--out", out, "Output CSV (stdout when omitted)");
  entropy->add_option("--plot", plot, "Also write a gnuplot script here");
  add_complex_options(entropy, s);
  add_entropy_options(entropy, s);

  auto* pea = app.add_subcommand("pea", "Persistent entropy automaton from an entropy CSV");
  pea->add_option("entropy", input, "Entropy CSV (tick,H,d1,d2)")->required();
  pea->add_option("-o,--out", out, "Output directory for pea.dot and pea.json")->required();
  add_segment_options(pea, s);

  auto* hda = app.add_subcommand("hda", "Chu spaces and Hasse diagrams from barcode generators");
  hda->add_option("barcode", input, "Barcode JSON")->required();
  hda->add_option("-o,--out", out, "Output directory")->required();
  add_hda_options(hda, s);

  auto* pipeline = app.add_subcommand("pipeline", "All stages in one run");
  auto* cfg_opt = pipeline->add_option("--config", config, "Simulator config; the default simulation when omitted");
  pipeline->add_option("--series", series, "Start from an existing series instead of simulating")->excludes(cfg_opt);
  pipeline->add_option("-o,--out", out, "Output directory")->required();
  add_complex_options(pipeline, s);
  add_entropy_options(pipeline, s);
  add_segment_options(pipeline, s);
  add_hda_options(pipeline, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (s.jobs == 0) s.jobs = std::max(1u, std::thread::hardware_concurrency());

  std::string stage = "sbtk";
  try {
    if (*simulate) {
      stage = "simulate";
      auto result = cmd_simulate(sim_config(config, s), out);
      std::cerr << "wrote " << result.size() << " observations to " << out << "\n";
    } else if (*complex) {
      stage = "complex";
      if (simplex_dim < 0) throw ConfigError("--max-dim must be non-negative");
      emit(out, cmd_complex(input, parse_weight_order(s.order), simplex_dim));
    } else if (*homology) {
      stage = "homology";
      const auto opts = complex_options(s);
      if (text) {
        emit(out, format_barcode_text(homology_of(load_edge_list(input), opts)));
      } else {
        emit(out, cmd_homology(input, opts));
      }
    } else if (*entropy) {
      stage = "entropy";
      emit(out, cmd_entropy(input, complex_options(s), entropy_options(s), s.jobs));
      if (!plot.empty()) {
        const std::string csv = out.empty() || out == "-" ? "entropy.csv" : fs::path(out).filename().string();
        write_file(plot, gnuplot_script(csv, fs::path(csv).stem().string() + ".png"));
      }
    } else if (*pea) {
      stage = "pea";
      auto files = cmd_pea(input, segment_overrides(s), s.extra, s.names);
      fs::create_directories(out);
      write_file((fs::path(out) / "pea.dot").string(), files.dot);
      write_file((fs::path(out) / "pea.json").string(), files.json);
      std::cerr << files.pea.states.size() << " states, " << files.pea.transitions.size() << " transitions\n";
    } else if (*hda) {
      stage = "hda";
      auto files = cmd_hda(input, s.actions, s.mutex);
      fs::create_directories(out);
      for (const auto& f : files) write_file((fs::path(out) / f.name).string(), f.content);
      std::cerr << files.size() / 2 << " coupled pairs\n";
    } else if (*pipeline) {
      stage = "pipeline";
      PipelineConfig pc;
      if (series.empty()) pc.sim = sim_config(config, s);
      pc.series_path = series;
      pc.complex = complex_options(s);
      pc.entropy = entropy_options(s);
      pc.segments = segment_overrides(s);
      pc.extra_path = s.extra;
      pc.naming_path = s.names;
      pc.actions_path = s.actions;
      pc.mutex_path = s.mutex;
      pc.out_dir = out;
      pc.jobs = s.jobs;
      auto report = cmd_pipeline(pc);
      for (const auto& note : report.notes) std::cerr << note << "\n";
      std::cerr << report.observations << " observations, " << report.pea.states.size() << " PEA states, "
                << report.hda_pairs << " coupled pairs\n";
    }
  } catch (const DataError& e) {
    std::cerr << "sbtk " << stage << ": " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "sbtk " << stage << ": internal invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "sbtk " << stage << ": " << e.what() << "\n";
    return 3;
  }
  return 0;
}
