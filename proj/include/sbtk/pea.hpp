#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbtk/entropy.hpp"

namespace sbtk {

enum class SegmentKind { plateau, peak, rising, falling };

std::string to_string(SegmentKind kind);

struct SegmentSample {
  Tick tick;
  double h;
  double dh;  // slope arriving at this sample (forward slope for the first)
};

// A contiguous run of chronogram samples [first, last] (point indices).
struct Segment {
  SegmentKind kind;
  std::size_t first;
  std::size_t last;
  Tick first_tick;
  Tick last_tick;
  double mean_h;
  double prominence = 0.0;  // peaks only
  std::vector<SegmentSample> evidence;
};

struct SegmentParams {
  double eps;
  std::size_t window = 5;
  double prominence;

  // eps = 0.05·max(H), prominence = 0.25·max(H), window = 5. A series that
  // is identically zero gets small positive thresholds instead.
  static SegmentParams defaults_for(const EntropySeries& s);
};

// Partition the chronogram into plateaus, peaks and monotone stretches.
//
// A sample is flat when the slope arriving at it satisfies |dh| < eps.
// Plateaus are maximal runs of at least `window` flat samples. Peaks are
// interior local maxima (a flat top shorter than `window` counts once) whose
// prominence reaches `prominence`; they take precedence over plateaus.
// Prominence is the usual topographic one: the higher of the two flank
// minima, each taken up to the nearest higher sample or the series end, is
// the base. The highest point of the series is measured down to its lower
// flank instead, so a spike that settles just below its own top still counts.
// Everything else is split into rising and falling stretches.
std::vector<Segment> segment(const EntropySeries& s, const SegmentParams& params);

// Invariant attached to a PEA state: H within the band observed on the
// state's plateaus and |dH/dt| < slope_tol.
struct EntropyInvariant {
  double h_min;
  double h_max;
  double slope_tol;
  double level;  // mean H over the state's plateau samples

  bool holds(double h, double dh) const;
  std::string describe() const;
};

struct PeaState {
  std::string name;
  EntropyInvariant invariant;
  std::vector<std::size_t> plateaus;  // indices into the segment list
};

struct PeaTransition {
  std::size_t from;
  std::string label;
  std::size_t to;
  bool from_data = true;

  bool operator==(const PeaTransition&) const = default;
};

struct ExtraTransition {
  std::string from;
  std::string label;
  std::string to;
};

struct PeaNaming {
  std::map<std::string, std::string> states;  // "r0" -> "Virgin"
  std::map<std::string, std::string> labels;  // "peak@45" -> "Immunization"
};

// Persistent Entropy Automaton: steady states with entropy invariants and
// labelled transitions. r0 is states[initial].
struct Pea {
  std::vector<PeaState> states;
  std::size_t initial = 0;
  std::vector<PeaTransition> transitions;
  std::vector<std::string> unresolved_peaks;  // trailing peaks with no plateau after them

  std::vector<std::string> labels() const;
  std::optional<std::size_t> find_state(const std::string& name) const;
  std::optional<std::size_t> state_for(double h, double dh) const;
};

// One state per distinct plateau level (levels closer than eps, or with
// overlapping H ranges, are merged). Consecutive plateau states are joined
// by a transition labelled with the intervening peak(s) ("peak@<tick>");
// a level change without a peak is labelled "shift@<tick>".
Pea build_pea(const std::vector<Segment>& segments, double eps,
              const std::vector<ExtraTransition>& extra = {}, const PeaNaming& naming = {});

std::string pea_to_dot(const Pea& pea);
nlohmann::json pea_to_json(const Pea& pea);
nlohmann::json segments_to_json(const std::vector<Segment>& segments);

std::vector<ExtraTransition> extra_transitions_from_json(const nlohmann::json& j);
PeaNaming naming_from_json(const nlohmann::json& j);

}  // namespace sbtk
