#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sbtk/chu.hpp"
#include "sbtk/entropy.hpp"
#include "sbtk/error.hpp"
#include "sbtk/filtration.hpp"
#include "sbtk/immune.hpp"
#include "sbtk/pea.hpp"
#include "sbtk/persistence.hpp"

namespace sbtk {

// A module error annotated with the stage that raised it.
class StageError : public DataError {
 public:
  StageError(std::string stage, const std::string& what)
      : DataError(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Runs fn(0..n-1) on up to `jobs` threads and returns results in index
// order. The exception of the lowest failing index is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

struct ComplexOptions {
  WeightOrder order = WeightOrder::descending;
  int max_dim = 1;  // homology dimension; complexes are built one higher
};

struct SegmentOverrides {
  std::optional<double> eps;
  std::optional<std::size_t> window;
  std::optional<double> prominence;

  SegmentParams resolve(const EntropySeries& s) const;
};

// Writes the series directory (obs_<tick>.csv + names.csv).
ObservationSeries cmd_simulate(const SimConfig& config, const std::string& out_dir);

// Filtration dump of an edge-list graph, simplices up to `max_dim`.
std::string cmd_complex(const std::string& graph_path, WeightOrder order, int max_dim);

Barcode homology_of(const WeightedGraph& g, const ComplexOptions& opts);
// Barcode JSON text of an edge-list graph.
std::string cmd_homology(const std::string& graph_path, const ComplexOptions& opts);

// Accepts a series directory, a series JSON array, a barcode JSON object or a
// single edge-list CSV. Returns the entropy CSV text.
EntropySeries entropy_series_of(const std::string& input, const ComplexOptions& copts, const EntropyOptions& eopts,
                                unsigned jobs);
std::string cmd_entropy(const std::string& input, const ComplexOptions& copts, const EntropyOptions& eopts,
                        unsigned jobs);

struct PeaFiles {
  std::string dot;
  std::string json;
  Pea pea;
  std::vector<Segment> segments;
  SegmentParams params;
};

// `extra_path` holds [{"from","label","to"}]; `naming_path` holds
// {"states": {...}, "labels": {...}}. Either may be empty.
PeaFiles cmd_pea(const std::string& entropy_csv_path, const SegmentOverrides& overrides,
                 const std::string& extra_path = {}, const std::string& naming_path = {});

struct HdaFile {
  std::string name;
  std::string content;
};

// chu_<u>_<v>.csv and hasse_<u>_<v>.dot per coupled pair. Empty paths use
// the default actions {elicits, reduces} with that pair mutually exclusive.
std::vector<HdaFile> cmd_hda(const std::string& barcode_path, const std::string& actions_path = {},
                             const std::string& mutex_path = {});

struct PipelineConfig {
  std::optional<SimConfig> sim;   // simulate first, or
  std::string series_path;        // start from an existing series
  ComplexOptions complex;
  EntropyOptions entropy;
  SegmentOverrides segments;
  std::string extra_path;
  std::string naming_path;
  std::string actions_path;
  std::string mutex_path;
  std::string out_dir;
  unsigned jobs = 1;
};

struct PipelineReport {
  std::size_t observations = 0;
  EntropySeries entropy;
  Pea pea;
  std::size_t hda_pairs = 0;
  std::vector<std::string> notes;
};

// series/, barcodes/, entropy.csv, entropy.gp, pea.dot, pea.json, hda/.
// Every file equals what the single-stage commands produce on the files
// written before it.
PipelineReport cmd_pipeline(const PipelineConfig& config);

std::string barcode_file_name(Tick tick);

}  // namespace sbtk
