#include "sigdiag/shapes.hpp"

#include <cmath>

namespace sigdiag {

SignalTrack track_of(const Trace& trace, const SignalExpr& expr) {
  SignalTrack s;
  s.time.reserve(trace.size());
  s.value.reserve(trace.size());
  for (size_t i = 0; i < trace.size(); ++i) {
    s.time.push_back(trace.timestamp(i));
    s.value.push_back(signal_value_at(trace, expr, i));
  }
  return s;
}

IndexWindow index_window(const Trace& trace, const EvaluationInterval& iv) {
  IndexWindow w;
  size_t lo = trace.lower_bound(iv.lower);
  size_t hi = trace.upper_bound(iv.upper);
  if (lo >= hi) return w;
  w.lo = lo;
  w.hi = hi - 1;
  w.empty = false;
  return w;
}

bool strictly_increasing(const SignalTrack& s, size_t i, size_t j) {
  for (size_t k = i; k < j; ++k)
    if (!(s.value[k] < s.value[k + 1])) return false;
  return true;
}

bool strictly_decreasing(const SignalTrack& s, size_t i, size_t j) {
  for (size_t k = i; k < j; ++k)
    if (!(s.value[k] > s.value[k + 1])) return false;
  return true;
}

bool non_increasing(const SignalTrack& s, size_t i, size_t j) {
  for (size_t k = i; k < j; ++k)
    if (s.value[k] < s.value[k + 1]) return false;
  return true;
}

bool non_decreasing(const SignalTrack& s, size_t i, size_t j) {
  for (size_t k = i; k < j; ++k)
    if (s.value[k] > s.value[k + 1]) return false;
  return true;
}

bool is_max_nonstrict(const SignalTrack& s, size_t t, size_t a, size_t b) {
  return non_decreasing(s, a, t) && non_increasing(s, t, b);
}

bool is_max_strict(const SignalTrack& s, size_t t, size_t a, size_t b) {
  return a < t && t < b && strictly_increasing(s, a, t) &&
         strictly_decreasing(s, t, b);
}

bool is_min_nonstrict(const SignalTrack& s, size_t t, size_t a, size_t b) {
  return non_increasing(s, a, t) && non_decreasing(s, t, b);
}

bool is_min_strict(const SignalTrack& s, size_t t, size_t a, size_t b) {
  return a < t && t < b && strictly_decreasing(s, a, t) &&
         strictly_increasing(s, t, b);
}

bool is_strict_extremum(const SignalTrack& s, size_t lo, size_t hi, size_t t) {
  if (t <= lo || t >= hi) return false;
  bool peak = s.value[t - 1] < s.value[t] && s.value[t] > s.value[t + 1];
  bool valley = s.value[t - 1] > s.value[t] && s.value[t] < s.value[t + 1];
  return peak || valley;
}

std::vector<size_t> strict_extrema(const SignalTrack& s, size_t lo, size_t hi) {
  std::vector<size_t> out;
  for (size_t t = lo + 1; t < hi; ++t)
    if (is_strict_extremum(s, lo, hi, t)) out.push_back(t);
  return out;
}

double width_between(const SignalTrack& s, size_t i, size_t j) {
  return std::fabs(s.time[j] - s.time[i]);
}

double peak_to_peak(const SignalTrack& s, size_t i, size_t j) {
  return std::fabs(s.value[i] - s.value[j]);
}

double amplitude(const SignalTrack& s, size_t a, size_t p, size_t b) {
  return std::max(std::fabs(s.value[p] - s.value[a]),
                  std::fabs(s.value[p] - s.value[b]));
}

double amp_distance(double measured, double target) {
  return std::fabs(measured - target);
}
double p2p_distance(double measured, double target) {
  return std::fabs(measured - target);
}
double width_distance(double measured, double target) {
  return std::fabs(measured - target);
}

namespace {

// Outer extremum of a spike: the signal turns there, or the window ends.
bool spike_edge_ok(const SignalTrack& s, size_t lo, size_t hi, size_t idx,
                   bool is_min, bool left) {
  if (left && idx == lo) return true;
  if (!left && idx == hi) return true;
  double neighbour = left ? s.value[idx - 1] : s.value[idx + 1];
  return is_min ? neighbour >= s.value[idx] : neighbour <= s.value[idx];
}

// Maximal flank window: walk outwards while the run keeps its direction.
size_t extend_left(const SignalTrack& s, size_t lo, size_t idx, bool descending,
                   bool strict) {
  size_t u = idx;
  while (u > lo) {
    double prev = s.value[u - 1], cur = s.value[u];
    bool ok = descending ? (strict ? prev > cur : prev >= cur)
                         : (strict ? prev < cur : prev <= cur);
    if (!ok) break;
    --u;
  }
  return u;
}

size_t extend_right(const SignalTrack& s, size_t hi, size_t idx, bool ascending,
                    bool strict) {
  size_t w = idx;
  while (w < hi) {
    double next = s.value[w + 1], cur = s.value[w];
    bool ok = ascending ? (strict ? next > cur : next >= cur)
                        : (strict ? next < cur : next <= cur);
    if (!ok) break;
    ++w;
  }
  return w;
}

}  // namespace

bool spike_shape(const SignalTrack& s, size_t lo, size_t hi, size_t a, size_t p,
                 size_t b, ShapePolarity polarity) {
  if (!(lo <= a && a < p && p < b && b <= hi)) return false;
  bool up = polarity == ShapePolarity::as_written;  // minima around a strict max
  bool inner_ok = up ? strictly_increasing(s, a, p) && strictly_decreasing(s, p, b)
                     : strictly_decreasing(s, a, p) && strictly_increasing(s, p, b);
  if (!inner_ok) return false;
  return spike_edge_ok(s, lo, hi, a, up, true) &&
         spike_edge_ok(s, lo, hi, b, up, false);
}

bool oscillation_shape(const SignalTrack& s, size_t lo, size_t hi, size_t a,
                       size_t p, size_t b, ShapePolarity polarity) {
  if (!(lo <= a && a < p && p < b && b <= hi)) return false;
  bool up = polarity == ShapePolarity::as_written;  // strict minima around a max
  bool inner_ok = up ? strictly_increasing(s, a, p) && strictly_decreasing(s, p, b)
                     : strictly_decreasing(s, a, p) && strictly_increasing(s, p, b);
  if (!inner_ok) return false;
  // All three extrema must be genuine strict turning points.
  if (a == lo || b == hi) return false;
  double before = s.value[a - 1], after = s.value[b + 1];
  return up ? (before > s.value[a] && after > s.value[b])
            : (before < s.value[a] && after < s.value[b]);
}

std::vector<ShapeInstance> spike_instances(const SignalTrack& s, size_t lo,
                                           size_t hi) {
  std::vector<ShapeInstance> out;
  if (s.size() == 0 || lo > hi) return out;
  for (ShapePolarity pol : {ShapePolarity::as_written, ShapePolarity::dual}) {
    bool up = pol == ShapePolarity::as_written;
    for (size_t a = lo; a + 2 <= hi; ++a) {
      for (size_t p = a + 1; p < hi; ++p) {
        bool inner_left = up ? strictly_increasing(s, a, p)
                             : strictly_decreasing(s, a, p);
        if (!inner_left) break;  // longer runs cannot recover
        for (size_t b = p + 1; b <= hi; ++b) {
          bool inner_right = up ? strictly_decreasing(s, p, b)
                                : strictly_increasing(s, p, b);
          if (!inner_right) break;
          if (!spike_shape(s, lo, hi, a, p, b, pol)) continue;
          ShapeInstance inst;
          inst.a = a;
          inst.p = p;
          inst.b = b;
          inst.polarity = pol;
          inst.u = extend_left(s, lo, a, up, false);
          inst.w = extend_right(s, hi, b, up, false);
          out.push_back(inst);
        }
      }
    }
  }
  return out;
}

std::vector<ShapeInstance> oscillation_instances(const SignalTrack& s, size_t lo,
                                                 size_t hi) {
  std::vector<ShapeInstance> out;
  if (s.size() == 0 || lo > hi) return out;
  for (ShapePolarity pol : {ShapePolarity::as_written, ShapePolarity::dual}) {
    bool up = pol == ShapePolarity::as_written;
    for (size_t a = lo + 1; a + 2 <= hi; ++a) {
      for (size_t p = a + 1; p < hi; ++p) {
        bool inner_left = up ? strictly_increasing(s, a, p)
                             : strictly_decreasing(s, a, p);
        if (!inner_left) break;
        for (size_t b = p + 1; b < hi; ++b) {
          bool inner_right = up ? strictly_decreasing(s, p, b)
                                : strictly_increasing(s, p, b);
          if (!inner_right) break;
          if (!oscillation_shape(s, lo, hi, a, p, b, pol)) continue;
          ShapeInstance inst;
          inst.a = a;
          inst.p = p;
          inst.b = b;
          inst.polarity = pol;
          inst.u = extend_left(s, lo, a, up, true);
          inst.w = extend_right(s, hi, b, up, true);
          out.push_back(inst);
        }
      }
    }
  }
  return out;
}

double instance_width(const SignalTrack& s, const ShapeInstance& inst) {
  return width_between(s, inst.a, inst.b);
}

double instance_amplitude(const SignalTrack& s, const ShapeInstance& inst) {
  return amplitude(s, inst.a, inst.p, inst.b);
}

double instance_p2p_left(const SignalTrack& s, const ShapeInstance& inst) {
  return peak_to_peak(s, inst.a, inst.p);
}

double instance_p2p_right(const SignalTrack& s, const ShapeInstance& inst) {
  return peak_to_peak(s, inst.p, inst.b);
}

double instance_period(const SignalTrack& s, const ShapeInstance& inst) {
  return width_between(s, inst.a, inst.b);
}

}  // namespace sigdiag
