#include "sbtk/entropy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "sbtk/error.hpp"
#include "sbtk/format.hpp"
#include "sbtk/numeric.hpp"

namespace sbtk {

namespace {

double interval_length(const Barcode& b, const Interval& iv, LengthMode mode) {
  if (mode == LengthMode::index) {
    const double m = static_cast<double>(b.max_filter) + 1.0;
    const double end = iv.death ? static_cast<double>(*iv.death) : m;
    return end - static_cast<double>(iv.birth);
  }
  if (b.weight_ladder.empty()) {
    // Edgeless complex: a single degenerate level at weight 0.
    return iv.death ? 0.0 : 1.0;
  }
  const double wb = b.weight_ladder.at(iv.birth);
  if (iv.death) return std::abs(b.weight_ladder.at(*iv.death) - wb);
  const double m = *std::max_element(b.weight_ladder.begin(), b.weight_ladder.end()) + 1.0;
  return m - wb;
}

}  // namespace

std::vector<double> bar_lengths(const Barcode& b, LengthMode mode) {
  std::vector<double> out;
  out.reserve(b.intervals.size());
  for (const auto& iv : b.intervals) {
    const double l = interval_length(b, iv, mode);
    if (l > 0.0) out.push_back(l);
  }
  return out;
}

double entropy_of_lengths(std::vector<double> lengths, double log_base) {
  lengths.erase(std::remove_if(lengths.begin(), lengths.end(), [](double l) { return !(l > 0.0); }),
                lengths.end());
  if (lengths.empty()) throw EmptyBarcode();
  std::sort(lengths.begin(), lengths.end());
  const double total = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  CompensatedSum sum;
  for (double l : lengths) {
    const double p = l / total;
    sum.add(-p * std::log(p));
  }
  const double h = sum.value() / std::log(log_base);
  // -Σ p log p of a single bar is -1·log 1 = 0; clamp the -0.0 sign.
  return h <= 0.0 ? 0.0 : h;
}

double persistent_entropy(const Barcode& b, const EntropyOptions& opts) {
  return entropy_of_lengths(bar_lengths(b, opts.lengths), opts.log_base);
}

std::map<int, double> entropy_by_dimension(const Barcode& b, const EntropyOptions& opts) {
  std::map<int, Barcode> split;
  for (const auto& iv : b.intervals) {
    auto& part = split[iv.dimension];
    part.max_filter = b.max_filter;
    part.weight_ladder = b.weight_ladder;
    part.order = b.order;
    part.intervals.push_back(iv);
  }
  std::map<int, double> out;
  for (const auto& [dim, part] : split) {
    auto lengths = bar_lengths(part, opts.lengths);
    if (!lengths.empty()) out[dim] = entropy_of_lengths(std::move(lengths), opts.log_base);
  }
  return out;
}

double EntropySeries::max_h() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.h);
  return m;
}

EntropySeries make_entropy_series(std::vector<EntropyPoint> points) {
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k].tick <= points[k - 1].tick) {
      throw UnorderedTicks("tick " + std::to_string(points[k].tick) + " after " +
                           std::to_string(points[k - 1].tick));
    }
  }
  EntropySeries s;
  s.points = std::move(points);
  const auto& p = s.points;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    s.d1.push_back((p[k + 1].h - p[k].h) / static_cast<double>(p[k + 1].tick - p[k].tick));
  }
  for (std::size_t k = 0; k + 1 < s.d1.size(); ++k) {
    s.d2.push_back((s.d1[k + 1] - s.d1[k]) / static_cast<double>(p[k + 2].tick - p[k + 1].tick));
  }
  return s;
}

EntropySeries chronogram(const std::vector<std::pair<Tick, Barcode>>& series, const EntropyOptions& opts) {
  std::vector<EntropyPoint> points;
  points.reserve(series.size());
  for (const auto& [tick, barcode] : series) {
    try {
      points.push_back({tick, persistent_entropy(barcode, opts)});
    } catch (const EmptyBarcode&) {
      throw EmptyBarcode(tick);
    }
  }
  return make_entropy_series(std::move(points));
}

std::string format_entropy_csv(const EntropySeries& s) {
  std::string out = "tick,H,d1,d2\n";
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    out += std::to_string(s.points[k].tick) + "," + format_double(s.points[k].h) + ",";
    if (k >= 1) out += format_double(s.d1[k - 1]);
    out += ",";
    if (k >= 2) out += format_double(s.d2[k - 2]);
    out += "\n";
  }
  return out;
}

EntropySeries parse_entropy_csv(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::vector<EntropyPoint> points;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.rfind("tick", 0) == 0) continue;  // header
    auto c1 = line.find(',');
    if (c1 == std::string_view::npos) throw ParseError("entropy CSV line " + std::to_string(line_no));
    auto c2 = line.find(',', c1 + 1);
    EntropyPoint p{};
    if (!parse_int(line.substr(0, c1), p.tick) ||
        !parse_double(line.substr(c1 + 1, c2 == std::string_view::npos ? c2 : c2 - c1 - 1), p.h)) {
      throw ParseError("entropy CSV line " + std::to_string(line_no));
    }
    points.push_back(p);
  }
  // Derivatives are recomputed from H so the series is self-consistent.
  return make_entropy_series(std::move(points));
}

std::string gnuplot_script(const std::string& csv_name, const std::string& png_name) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set terminal pngcairo size 900,500\n";
  s += "set output '" + png_name + "'\n";
  s += "set xlabel 'tick'\n";
  s += "set ylabel 'persistent entropy H'\n";
  s += "set key off\n";
  s += "set grid\n";
  s += "plot '" + csv_name + "' using 1:2 every ::1 with linespoints lw 2 pt 7 ps 0.6\n";
  return s;
}

LengthMode parse_length_mode(const std::string& s) {
  if (s == "index") return LengthMode::index;
  if (s == "weight" || s == "real") return LengthMode::weight;
  throw ConfigError("unknown length mode '" + s + "'");
}

}  // namespace sbtk
