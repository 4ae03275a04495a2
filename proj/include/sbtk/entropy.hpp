#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sbtk/graph.hpp"
#include "sbtk/persistence.hpp"

namespace sbtk {

// How bar lengths are measured. `index` uses filter indices with infinite
// bars closed at m = max_filter + 1. `weight` uses ladder weights with
// infinite bars closed at (largest ladder weight + 1).
enum class LengthMode { index, weight };

struct EntropyOptions {
  double log_base = std::exp(1.0);
  LengthMode lengths = LengthMode::index;
};

// Positive bar lengths of all dimensions pooled; zero-length bars dropped.
std::vector<double> bar_lengths(const Barcode& b, LengthMode mode = LengthMode::index);

// Shannon entropy of the normalised bar lengths. Terms are accumulated in
// sorted order so the value does not depend on interval order.
double persistent_entropy(const Barcode& b, const EntropyOptions& opts = {});
double entropy_of_lengths(std::vector<double> lengths, double log_base = std::exp(1.0));

// Same quantity restricted to each dimension (diagnostics only).
std::map<int, double> entropy_by_dimension(const Barcode& b, const EntropyOptions& opts = {});

struct EntropyPoint {
  Tick tick;
  double h;
};

// H(t) with finite differences. d1[k] is the slope between points k and
// k+1; d2[k] = (d1[k+1] - d1[k]) / (tick[k+2] - tick[k+1]).
struct EntropySeries {
  std::vector<EntropyPoint> points;
  std::vector<double> d1;
  std::vector<double> d2;

  double max_h() const;
};

EntropySeries make_entropy_series(std::vector<EntropyPoint> points);
EntropySeries chronogram(const std::vector<std::pair<Tick, Barcode>>& series, const EntropyOptions& opts = {});

// `tick,H,d1,d2`; row k carries d1[k-1] and d2[k-2], empty where undefined.
std::string format_entropy_csv(const EntropySeries& s);
EntropySeries parse_entropy_csv(const std::string& text);

// gnuplot script that plots H(t) from the CSV next to it.
std::string gnuplot_script(const std::string& csv_name, const std::string& png_name);

LengthMode parse_length_mode(const std::string& s);

}  // namespace sbtk
