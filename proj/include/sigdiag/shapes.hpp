#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sigdiag/ast.hpp"
#include "sigdiag/trace.hpp"

namespace sigdiag {

/// One signal expression sampled over every record of a prepared trace.
struct SignalTrack {
  std::vector<double> time;
  std::vector<double> value;
  size_t size() const { return time.size(); }
};

SignalTrack track_of(const Trace& trace, const SignalExpr& expr);

/// Sample-index window [lo, hi] covered by an evaluation interval.
struct IndexWindow {
  size_t lo = 0;
  size_t hi = 0;
  bool empty = true;
  size_t count() const { return empty ? 0 : hi - lo + 1; }
};

IndexWindow index_window(const Trace& trace, const EvaluationInterval& iv);

// Monotonicity over index ranges [i, j] (pairwise over all sample pairs;
// equivalent to the consecutive-pair check used here).
bool strictly_increasing(const SignalTrack& s, size_t i, size_t j);
bool strictly_decreasing(const SignalTrack& s, size_t i, size_t j);
bool non_increasing(const SignalTrack& s, size_t i, size_t j);
bool non_decreasing(const SignalTrack& s, size_t i, size_t j);

/// mon: strictly increasing over every sample pair of [i, j].
inline bool is_monotone_increasing(const SignalTrack& s, size_t i, size_t j) {
  return strictly_increasing(s, i, j);
}

// Windowed extremum predicates. The window [a, b] must contain t.
bool is_max_nonstrict(const SignalTrack& s, size_t t, size_t a, size_t b);
bool is_max_strict(const SignalTrack& s, size_t t, size_t a, size_t b);
bool is_min_nonstrict(const SignalTrack& s, size_t t, size_t a, size_t b);
bool is_min_strict(const SignalTrack& s, size_t t, size_t a, size_t b);

/// Strict local extremum somewhere strictly inside (lo, hi): a turning point
/// against its immediate neighbours.
bool is_strict_extremum(const SignalTrack& s, size_t lo, size_t hi, size_t t);
std::vector<size_t> strict_extrema(const SignalTrack& s, size_t lo, size_t hi);

double width_between(const SignalTrack& s, size_t i, size_t j);
double peak_to_peak(const SignalTrack& s, size_t i, size_t j);
/// max(|s(p) - s(a)|, |s(p) - s(b)|) for extrema a < p < b.
double amplitude(const SignalTrack& s, size_t a, size_t p, size_t b);

double amp_distance(double measured, double target);
double p2p_distance(double measured, double target);
double width_distance(double measured, double target);

enum class ShapePolarity { as_written, dual };

/// A spike or oscillation occurrence: three alternating extrema a < p < b
/// with strictly monotone runs between them, plus the maximal flank window
/// [u, w] around them.
///
/// Spikes admit boundary outer extrema: `a` (and `b`) may sit on the window
/// edge, otherwise the signal must actually turn there. Oscillations require
/// all three extrema to be genuine strict turning points with a real
/// descent/ascent on the outside.
struct ShapeInstance {
  size_t a = 0, p = 0, b = 0;
  size_t u = 0, w = 0;
  ShapePolarity polarity = ShapePolarity::as_written;
};

std::vector<ShapeInstance> spike_instances(const SignalTrack& s, size_t lo,
                                           size_t hi);
std::vector<ShapeInstance> oscillation_instances(const SignalTrack& s, size_t lo,
                                                 size_t hi);

bool spike_shape(const SignalTrack& s, size_t lo, size_t hi, size_t a, size_t p,
                 size_t b, ShapePolarity polarity);
bool oscillation_shape(const SignalTrack& s, size_t lo, size_t hi, size_t a,
                       size_t p, size_t b, ShapePolarity polarity);

double instance_width(const SignalTrack& s, const ShapeInstance& inst);
double instance_amplitude(const SignalTrack& s, const ShapeInstance& inst);
double instance_p2p_left(const SignalTrack& s, const ShapeInstance& inst);
double instance_p2p_right(const SignalTrack& s, const ShapeInstance& inst);
/// Oscillation period: time between the two outer extrema.
double instance_period(const SignalTrack& s, const ShapeInstance& inst);

}  // namespace sigdiag
