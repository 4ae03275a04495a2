#include "sbtk/pipeline.hpp"

#include <filesystem>

#include "sbtk/format.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sbtk {

namespace {

template <typename F>
auto in_stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const DataError& e) {
    throw StageError(name, e.what());
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(name + ": " + e.what());
  }
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

SegmentParams SegmentOverrides::resolve(const EntropySeries& s) const {
  SegmentParams p = SegmentParams::defaults_for(s);
  if (eps) p.eps = *eps;
  if (window) p.window = *window;
  if (prominence) p.prominence = *prominence;
  return p;
}

std::string barcode_file_name(Tick tick) { return "barcode_" + std::to_string(tick) + ".json"; }

ObservationSeries cmd_simulate(const SimConfig& config, const std::string& out_dir) {
  ObservationSeries series = run(config);
  save_series_directory(series, out_dir);
  return series;
}

std::string cmd_complex(const std::string& graph_path, WeightOrder order, int max_dim) {
  return format_filtration(build_filtration(load_edge_list(graph_path), order, max_dim));
}

Barcode homology_of(const WeightedGraph& g, const ComplexOptions& opts) {
  return persistent_homology(build_filtration(g, opts.order, opts.max_dim + 1), opts.max_dim);
}

std::string cmd_homology(const std::string& graph_path, const ComplexOptions& opts) {
  return dump(barcode_to_json(homology_of(load_edge_list(graph_path), opts)));
}

EntropySeries entropy_series_of(const std::string& input, const ComplexOptions& copts, const EntropyOptions& eopts,
                                unsigned jobs) {
  auto from_series = [&](const ObservationSeries& series) {
    const auto& obs = series.observations();
    auto barcodes = parallel_map<std::pair<Tick, Barcode>>(obs.size(), jobs, [&](std::size_t i) {
      return std::pair<Tick, Barcode>{obs[i].tick, homology_of(obs[i].graph, copts)};
    });
    return chronogram(barcodes, eopts);
  };
  if (fs::is_directory(input)) return from_series(load_series_directory(input));
  const std::string text = read_file(input);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') return from_series(load_series(input));
  if (first != std::string::npos && text[first] == '{') {
    return chronogram({{0, barcode_from_json(read_json(input))}}, eopts);
  }
  return chronogram({{0, homology_of(parse_edge_list(text, input), copts)}}, eopts);
}

std::string cmd_entropy(const std::string& input, const ComplexOptions& copts, const EntropyOptions& eopts,
                        unsigned jobs) {
  return format_entropy_csv(entropy_series_of(input, copts, eopts, jobs));
}

PeaFiles cmd_pea(const std::string& entropy_csv_path, const SegmentOverrides& overrides, const std::string& extra_path,
                 const std::string& naming_path) {
  const EntropySeries series = parse_entropy_csv(read_file(entropy_csv_path));
  std::vector<ExtraTransition> extra;
  if (!extra_path.empty()) extra = extra_transitions_from_json(read_json(extra_path));
  PeaNaming naming;
  if (!naming_path.empty()) naming = naming_from_json(read_json(naming_path));

  PeaFiles out;
  out.params = overrides.resolve(series);
  out.segments = segment(series, out.params);
  out.pea = build_pea(out.segments, out.params.eps, extra, naming);
  out.dot = pea_to_dot(out.pea);
  json j = pea_to_json(out.pea);
  j["parameters"] = {{"eps", out.params.eps}, {"window", out.params.window}, {"prominence", out.params.prominence}};
  j["segments"] = segments_to_json(out.segments);
  out.json = dump(j);
  return out;
}

std::vector<HdaFile> cmd_hda(const std::string& barcode_path, const std::string& actions_path,
                             const std::string& mutex_path) {
  const json actions = actions_path.empty() ? json::array({"elicits", "reduces"}) : read_json(actions_path);
  json mutex;
  if (!mutex_path.empty()) {
    mutex = read_json(mutex_path);
  } else if (actions_path.empty()) {
    mutex = json::array({json::array({"elicits", "reduces"})});
  }
  const HdaOptions opts = hda_options_from_json(actions, mutex);
  std::vector<HdaFile> out;
  for (const auto& pair : hda_from_barcode(load_barcode(barcode_path), opts)) {
    const std::string stem = std::to_string(pair.u) + "_" + std::to_string(pair.v);
    out.push_back({"chu_" + stem + ".csv", format_chu_csv(pair.space)});
    out.push_back({"hasse_" + stem + ".dot", hasse_to_dot(hasse(pair.space), "hasse_" + stem)});
  }
  return out;
}

PipelineReport cmd_pipeline(const PipelineConfig& config) {
  if (config.out_dir.empty()) throw ConfigError("pipeline needs an output directory");
  const fs::path out(config.out_dir);
  const fs::path series_dir = out / "series";
  const fs::path barcode_dir = out / "barcodes";
  PipelineReport report;

  const ObservationSeries series = in_stage("simulate", [&] {
    if (config.sim) return cmd_simulate(*config.sim, series_dir.string());
    if (config.series_path.empty()) throw ConfigError("pipeline needs a simulator config or a series");
    ObservationSeries s = load_series(config.series_path);
    save_series_directory(s, series_dir.string());
    return s;
  });
  report.observations = series.size();
  if (series.empty()) throw StageError("simulate", "series is empty");

  in_stage("homology", [&] {
    fs::create_directories(barcode_dir);
    const auto& obs = series.observations();
    auto texts = parallel_map<std::string>(obs.size(), config.jobs, [&](std::size_t i) {
      return cmd_homology((series_dir / observation_file_name(obs[i].tick)).string(), config.complex);
    });
    for (std::size_t i = 0; i < obs.size(); ++i) {
      write_file((barcode_dir / barcode_file_name(obs[i].tick)).string(), texts[i]);
    }
    return 0;
  });

  in_stage("entropy", [&] {
    write_file((out / "entropy.csv").string(),
               cmd_entropy(series_dir.string(), config.complex, config.entropy, config.jobs));
    write_file((out / "entropy.gp").string(), gnuplot_script("entropy.csv", "entropy.png"));
    report.entropy = parse_entropy_csv(read_file((out / "entropy.csv").string()));
    return 0;
  });

  in_stage("pea", [&] {
    PeaFiles files = cmd_pea((out / "entropy.csv").string(), config.segments, config.extra_path, config.naming_path);
    write_file((out / "pea.dot").string(), files.dot);
    write_file((out / "pea.json").string(), files.json);
    report.pea = std::move(files.pea);
    return 0;
  });

  in_stage("hda", [&] {
    const Tick last = series.observations().back().tick;
    try {
      auto files = cmd_hda((barcode_dir / barcode_file_name(last)).string(), config.actions_path, config.mutex_path);
      fs::create_directories(out / "hda");
      for (const auto& f : files) write_file((out / "hda" / f.name).string(), f.content);
      report.hda_pairs = files.size() / 2;
    } catch (const NoGenerators& e) {
      report.notes.push_back(std::string("hda skipped: ") + e.what());
    }
    return 0;
  });
  return report;
}

}  // namespace sbtk
