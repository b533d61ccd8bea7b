#include "sigdiag/diagnosis.hpp"

#include <algorithm>
#include <cmath>

namespace sigdiag {

std::optional<size_t> tie_break(const std::vector<WitnessCandidate>& candidates,
                                double target) {
  std::optional<size_t> best;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (!best) {
      best = i;
      continue;
    }
    const auto& a = candidates[i];
    const auto& b = candidates[*best];
    double da = std::fabs(a.measure - target);
    double db = std::fabs(b.measure - target);
    if (da < db || (da == db && (a.start < b.start ||
                                 (a.start == b.start && a.length < b.length))))
      best = i;
  }
  return best;
}

namespace {

struct Window {
  SignalTrack track;
  size_t lo = 0, hi = 0;
  bool empty = true;
};

Window pattern_window(const Trace& trace, const SignalExpr& expr,
                      const EvaluationInterval& iv) {
  Window w;
  w.track = track_of(trace, expr);
  IndexWindow iw = index_window(trace, iv);
  if (iw.empty) return w;
  w.lo = iw.lo;
  w.hi = iw.hi;
  w.empty = false;
  return w;
}

RecordRef record_of(const SignalTrack& s, size_t i) {
  return {s.time[i], s.value[i]};
}

// Earliest index attaining the window maximum / minimum.
size_t argmax(const SignalTrack& s, size_t lo, size_t hi) {
  size_t best = lo;
  for (size_t i = lo + 1; i <= hi; ++i)
    if (s.value[i] > s.value[best]) best = i;
  return best;
}

size_t argmin(const SignalTrack& s, size_t lo, size_t hi) {
  size_t best = lo;
  for (size_t i = lo + 1; i <= hi; ++i)
    if (s.value[i] < s.value[best]) best = i;
  return best;
}

RecordPairPayload max_min_pair(const SignalTrack& s, size_t lo, size_t hi) {
  return {record_of(s, argmax(s, lo, hi)), record_of(s, argmin(s, lo, hi))};
}

std::map<std::string, double> condition_values(const Trace& trace,
                                               const Condition& cond,
                                               size_t index) {
  std::set<std::string> vars;
  std::vector<const Condition*> stack{&cond};
  while (!stack.empty()) {
    const Condition* c = stack.back();
    stack.pop_back();
    if (c->kind == Condition::Kind::cmp) {
      collect_variables(*c->signal, vars);
    } else {
      stack.push_back(c->lhs.get());
      stack.push_back(c->rhs.get());
    }
  }
  std::map<std::string, double> out;
  for (const auto& v : vars) out[v] = trace.value(index, v);
  return out;
}

std::string signal_key(const SignalExpr& expr) { return to_string(expr); }

struct Builder {
  const Trace& trace;
  const CauseBinding& b;
  const EvalOptions& opts;

  const Pattern& body() const { return *b.atom.scope.body; }

  std::optional<DiagnosisInstance> make(std::string id,
                                        DiagnosisPayload payload,
                                        ShapePolarity pol =
                                            ShapePolarity::as_written) const {
    DiagnosisInstance inst;
    inst.id = std::move(id);
    inst.cause = b.id;
    inst.dual = b.dual;
    inst.polarity = pol;
    inst.payload = std::move(payload);
    return inst;
  }

  // --- scope diagnoses -----------------------------------------------------

  std::optional<DiagnosisInstance> absolute_boundary() const {
    EvaluationInterval span{trace.t_initial(), trace.t_end()};
    const Scope& sc = b.atom.scope;
    switch (b.id.family) {
      case CauseFamily::a_at:
        return make("d_a_at_1", IntervalAndBoundary{span, sc.t1});
      case CauseFamily::a_bef:
        return make("d_a_bef_1", IntervalAndBoundary{span, sc.t1});
      case CauseFamily::a_aft:
        return make("d_a_aft_1", IntervalAndBoundary{span, sc.t1});
      case CauseFamily::a_bet:
        return make("d_a_bet_1", IntervalAndBoundaries{span, sc.t1, sc.t2});
      default: return std::nullopt;
    }
  }

  std::optional<DiagnosisInstance> event_boundary() const {
    const Scope& sc = b.atom.scope;
    const size_t n = trace.size();
    auto window = [&](size_t i, size_t j) {
      return EvaluationInterval{trace.timestamp(i), trace.timestamp(j)};
    };
    auto pattern_holds = [&](const Pattern& p, size_t i, size_t j) {
      return eval_pattern(trace, window(i, j), p, opts);
    };
    switch (b.id.family) {
      case CauseFamily::e_bef: {
        for (size_t t1 = 1; t1 < n; ++t1)
          for (size_t t2 = t1 + 1; t2 < n; ++t2) {
            if (!pattern_holds(*sc.opener, t1, t2)) continue;
            bool before = false;
            for (size_t t3 = 0; t3 + 1 < t1 && !before; ++t3)
              for (size_t t4 = t3 + 1; t4 < t1; ++t4)
                if (pattern_holds(*sc.body, t3, t4)) {
                  before = true;
                  break;
                }
            if (!before)
              return make("d_e_bef_1", IntervalOnly{window(t1, t2)});
          }
        return std::nullopt;
      }
      case CauseFamily::e_aft: {
        for (size_t t1 = 0; t1 + 1 < n; ++t1)
          for (size_t t2 = t1 + 1; t2 + 1 < n; ++t2) {
            if (!pattern_holds(*sc.opener, t1, t2)) continue;
            bool after = false;
            for (size_t t3 = t2 + 1; t3 + 1 < n && !after; ++t3)
              for (size_t t4 = t3 + 1; t4 < n; ++t4)
                if (pattern_holds(*sc.body, t3, t4)) {
                  after = true;
                  break;
                }
            if (!after) return make("d_e_aft_1", IntervalOnly{window(t1, t2)});
          }
        return std::nullopt;
      }
      case CauseFamily::e_bet: {
        // Last end of an opener occurrence, then first start of a later
        // closer occurrence with the body failing in between.
        for (size_t t2 = n; t2-- > 1;) {
          bool opener_ends_here = false;
          for (size_t t1 = 0; t1 < t2; ++t1)
            if (pattern_holds(*sc.opener, t1, t2)) {
              opener_ends_here = true;
              break;
            }
          if (!opener_ends_here) continue;
          for (size_t t3 = t2 + 1; t3 + 1 < n; ++t3) {
            bool closer_starts_here = false;
            for (size_t t4 = t3 + 1; t4 < n; ++t4)
              if (pattern_holds(*sc.closer, t3, t4)) {
                closer_starts_here = true;
                break;
              }
            if (!closer_starts_here) continue;
            if (!pattern_holds(*sc.body, t2, t3))
              return make("d_e_bet_1", IntervalOnly{window(t2, t3)});
          }
        }
        return std::nullopt;
      }
      default: return std::nullopt;
    }
  }

  // --- pattern diagnoses ---------------------------------------------------

  std::optional<DiagnosisInstance> assertion() const {
    IndexWindow w = index_window(trace, b.interval);
    if (w.empty) return std::nullopt;
    const Condition& cond = *body().condition;
    for (size_t t = w.lo; t <= w.hi; ++t) {
      if (!eval_condition(trace, t, cond, opts))
        return make("d_assert_1",
                    RecordWithValues{trace.timestamp(t),
                                     condition_values(trace, cond, t)});
    }
    return std::nullopt;
  }

  std::optional<DiagnosisInstance> becomes() const {
    const Pattern& p = body();
    Window w = pattern_window(trace, *p.signal, b.interval);
    if (w.empty) return std::nullopt;
    const auto& s = w.track;
    auto sat = [&](size_t i) {
      return compare(s.value[i], p.op, p.value, opts.epsilon);
    };
    switch (b.id.index) {
      case 1:
      case 2:
        return make(b.id.index == 1 ? "d_becomes_1" : "d_becomes_2",
                    max_min_pair(s, w.lo, w.hi));
      case 3: {
        for (size_t i = w.hi; i-- > w.lo;) {
          if (sat(i) && !sat(i + 1))
            return make("d_becomes_3",
                        RecordPairPayload{record_of(s, i), record_of(s, i + 1)});
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<DiagnosisInstance> spike() const {
    const Pattern& p = body();
    Window w = pattern_window(trace, *p.signal, b.interval);
    if (w.empty) return std::nullopt;
    const auto& s = w.track;
    switch (b.id.index) {
      case 1:
      case 2: {
        const bool amp = b.id.index == 1;
        const ValueConstraint& c = amp ? *p.amplitude : *p.width;
        auto instances = spike_instances(s, w.lo, w.hi);
        std::vector<WitnessCandidate> candidates;
        std::vector<size_t> keep;
        for (size_t i = 0; i < instances.size(); ++i) {
          double measured = amp ? instance_amplitude(s, instances[i])
                                : instance_width(s, instances[i]);
          if (compare(measured, c.op, c.value, opts.epsilon)) continue;
          candidates.push_back({measured, s.time[instances[i].a],
                                s.time[instances[i].b] - s.time[instances[i].a]});
          keep.push_back(i);
        }
        auto best = tie_break(candidates, c.value);
        if (!best) return std::nullopt;
        const auto& inst = instances[keep[*best]];
        EvaluationInterval iv{s.time[inst.a], s.time[inst.b]};
        return make(amp ? "d_spike_1" : "d_spike_2",
                    IntervalWithValue{iv, candidates[*best].measure},
                    inst.polarity);
      }
      case 3:
        return make("d_spike_3",
                    IntervalWithValue{b.interval, s.value[w.lo]});
      case 4:
        return make("d_spike_4", max_min_pair(s, w.lo, w.hi));
      case 5: {
        auto pair = max_min_pair(s, w.lo, w.hi);
        return make("d_spike_5", RecordPairPayload{pair.second, pair.first});
      }
    }
    return std::nullopt;
  }

  std::optional<DiagnosisInstance> oscillation() const {
    const Pattern& p = body();
    Window w = pattern_window(trace, *p.signal, b.interval);
    if (w.empty) return std::nullopt;
    const auto& s = w.track;
    switch (b.id.index) {
      case 1:
      case 2: {
        const bool amp = b.id.index == 1;
        const ValueConstraint& c = amp ? *p.p2p_amp : *p.period;
        auto instances = oscillation_instances(s, w.lo, w.hi);
        std::vector<WitnessCandidate> candidates;
        std::vector<size_t> keep;
        for (size_t i = 0; i < instances.size(); ++i) {
          const auto& inst = instances[i];
          double measured;
          if (amp) {
            bool left_ok = compare(instance_p2p_left(s, inst), c.op, c.value,
                                   opts.epsilon);
            bool right_ok = compare(instance_p2p_right(s, inst), c.op, c.value,
                                    opts.epsilon);
            if (left_ok || right_ok) continue;
            measured = std::max(instance_p2p_left(s, inst),
                                instance_p2p_right(s, inst));
          } else {
            measured = instance_period(s, inst);
            if (compare(measured, c.op, c.value, opts.epsilon)) continue;
          }
          candidates.push_back(
              {measured, s.time[inst.u], s.time[inst.w] - s.time[inst.u]});
          keep.push_back(i);
        }
        auto best = tie_break(candidates, c.value);
        if (!best) return std::nullopt;
        const auto& inst = instances[keep[*best]];
        EvaluationInterval iv{s.time[inst.u], s.time[inst.w]};
        return make(amp ? "d_oscillation_1" : "d_oscillation_2",
                    IntervalWithValue{iv, candidates[*best].measure},
                    inst.polarity);
      }
      case 3: {
        auto extrema = strict_extrema(s, w.lo, w.hi);
        if (extrema.empty()) return std::nullopt;
        size_t t = extrema.front();
        return make("d_oscillation_3",
                    RecordWithValues{s.time[t],
                                     {{signal_key(*p.signal), s.value[t]}}});
      }
      case 4: {
        auto extrema = strict_extrema(s, w.lo, w.hi);
        if (extrema.size() < 2) return std::nullopt;
        return make("d_oscillation_4",
                    RecordPairPayload{record_of(s, extrema[0]),
                                      record_of(s, extrema[1])});
      }
      case 5:
        return make("d_oscillation_5",
                    IntervalWithValue{b.interval, s.value[w.lo]});
      case 6:
        return make("d_oscillation_6", max_min_pair(s, w.lo, w.hi));
      case 7: {
        auto pair = max_min_pair(s, w.lo, w.hi);
        return make("d_oscillation_7",
                    RecordPairPayload{pair.second, pair.first});
      }
    }
    return std::nullopt;
  }

  std::optional<DiagnosisInstance> rises() const {
    const Pattern& p = body();
    Window w = pattern_window(trace, *p.signal, b.interval);
    if (w.empty) return std::nullopt;
    const auto& s = w.track;
    const bool up = !b.dual;
    auto reached = [&](size_t i) {
      return up ? s.value[i] >= p.value : s.value[i] <= p.value;
    };
    switch (b.id.index) {
      case 1:
      case 2:
        return make(b.id.index == 1 ? "d_rises_1" : "d_rises_2",
                    max_min_pair(s, w.lo, w.hi));
      case 3: {
        // Crossing point with clean history; report the first consecutive
        // pair before it that breaks monotonicity.
        for (size_t t = w.lo; t <= w.hi; ++t) {
          if (s.time[t] <= b.interval.lower) continue;
          if (!reached(t)) continue;
          bool clean = true;
          for (size_t t1 = w.lo; t1 < t && clean; ++t1)
            if (reached(t1)) clean = false;
          if (!clean) break;
          for (size_t i = w.lo; i + 1 < t; ++i) {
            bool breaks = up ? s.value[i] > s.value[i + 1]
                             : s.value[i] < s.value[i + 1];
            if (breaks)
              return make("d_rises_3", RecordPairPayload{record_of(s, i),
                                                         record_of(s, i + 1)});
          }
          break;
        }
        return std::nullopt;
      }
      case 4: {
        for (size_t i = w.lo; i < w.hi; ++i) {
          bool drop = up ? (reached(i) && !reached(i + 1) &&
                            s.value[i + 1] < p.value)
                         : (reached(i) && s.value[i + 1] > p.value);
          if (drop)
            return make("d_rises_4", RecordPairPayload{record_of(s, i),
                                                       record_of(s, i + 1)});
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<DiagnosisInstance> overshoots() const {
    const Pattern& p = body();
    Window w = pattern_window(trace, *p.signal, b.interval);
    if (w.empty) return std::nullopt;
    const auto& s = w.track;
    const bool up = !b.dual;
    const double limit = up ? p.target + p.margin : p.target - p.margin;
    auto within_band = [&](size_t i) {
      return up ? (s.value[i] >= p.target && s.value[i] <= limit)
                : (s.value[i] <= p.target && s.value[i] >= limit);
    };
    auto under = [&](size_t i) {
      return up ? s.value[i] < p.target : s.value[i] > p.target;
    };
    switch (b.id.index) {
      case 1:
      case 2:
        return make(b.id.index == 1 ? "d_overshoots_1" : "d_overshoots_2",
                    max_min_pair(s, w.lo, w.hi));
      case 3: {
        for (size_t t = w.lo; t <= w.hi; ++t) {
          if (s.time[t] <= b.interval.lower) continue;
          if (!within_band(t)) continue;
          bool history = true;
          for (size_t t2 = w.lo; t2 < t && history; ++t2)
            if (up ? s.value[t2] > p.target : s.value[t2] < p.target)
              history = false;
          if (!history) continue;
          bool bounded = true;
          for (size_t t1 = t + 1; t1 <= w.hi && bounded; ++t1)
            if (up ? s.value[t1] > limit : s.value[t1] < limit) bounded = false;
          if (!bounded) continue;
          for (size_t i = w.lo; i + 1 < t; ++i) {
            if (s.time[i] <= b.interval.lower) continue;
            bool breaks = up ? s.value[i] >= s.value[i + 1]
                             : s.value[i] <= s.value[i + 1];
            if (breaks)
              return make("d_overshoots_3",
                          RecordPairPayload{record_of(s, i),
                                            record_of(s, i + 1)});
          }
        }
        return std::nullopt;
      }
      case 4: {
        for (size_t i = w.hi; i-- > w.lo;) {
          if (within_band(i) && under(i + 1))
            return make("d_overshoots_4",
                        RecordPairPayload{record_of(s, i), record_of(s, i + 1)});
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<DiagnosisInstance> if_then() const {
    const Pattern& p = body();
    IndexWindow w = index_window(trace, b.interval);
    if (w.empty) return std::nullopt;
    auto window = [&](size_t i, size_t j) {
      return EvaluationInterval{trace.timestamp(i), trace.timestamp(j)};
    };
    auto gap_ok = [&](double gap) {
      if (!p.within) return true;
      switch (*p.within) {
        case WithinBound::exactly: return gap == p.within_bound;
        case WithinBound::at_most: return gap <= p.within_bound;
        case WithinBound::at_least: return gap >= p.within_bound;
      }
      return false;
    };
    // Trigger ends are scanned from the latest backwards; the reported window
    // starts at the end of the last qualifying trigger occurrence.
    for (size_t j = w.hi + 1; j-- > w.lo + 1;) {
      if (trace.timestamp(j) >= b.interval.upper) continue;
      bool triggered = false;
      for (size_t i = w.lo; i < j; ++i) {
        if (trace.timestamp(i) >= b.interval.upper) break;
        if (eval_pattern(trace, window(i, j), *p.trigger, opts)) {
          triggered = true;
          break;
        }
      }
      if (!triggered) continue;
      if (b.id.index == 1) {
        bool responded = false;
        for (size_t k = j; k <= w.hi && !responded; ++k)
          for (size_t l = k + 1; l <= w.hi; ++l)
            if (eval_pattern(trace, window(k, l), *p.response, opts)) {
              responded = true;
              break;
            }
        if (responded) continue;
        return make("d_if_then_1",
                    IntervalOnly{{trace.timestamp(j), b.interval.upper}});
      }
      // index 2: every later response misses the distance bound; report the
      // first response start after this trigger.
      bool all_violate = true;
      std::optional<size_t> first_response;
      for (size_t k = j; k <= w.hi && all_violate; ++k)
        for (size_t l = k + 1; l <= w.hi; ++l) {
          if (!eval_pattern(trace, window(k, l), *p.response, opts)) continue;
          if (gap_ok(trace.timestamp(k) - trace.timestamp(j))) {
            all_violate = false;
            break;
          }
          if (!first_response) first_response = k;
        }
      if (!all_violate || !first_response) continue;
      double t2 = trace.timestamp(j);
      double t3 = trace.timestamp(*first_response);
      return make("d_if_then_2", IntervalWithDistance{{t2, t3}, t3 - t2});
    }
    return std::nullopt;
  }

  // --- negation ------------------------------------------------------------

  std::optional<DiagnosisInstance> negation() const {
    const Scope& sc = b.atom.scope;
    EvaluationInterval iv = derived_interval(trace, sc);
    const Pattern& p = *sc.body;
    switch (p.kind) {
      case Pattern::Kind::assertion: {
        IndexWindow w = index_window(trace, iv);
        if (w.empty) return std::nullopt;
        for (size_t t = w.lo; t <= w.hi; ++t)
          if (eval_condition(trace, t, *p.condition, opts))
            return make("d_not_assert",
                        RecordWithValues{trace.timestamp(t),
                                         condition_values(trace, *p.condition, t)});
        return std::nullopt;
      }
      case Pattern::Kind::becomes: {
        Window w = pattern_window(trace, *p.signal, iv);
        if (w.empty) return std::nullopt;
        const auto& s = w.track;
        for (size_t t = w.lo; t <= w.hi; ++t) {
          if (s.time[t] <= iv.lower) continue;
          if (!compare(s.value[t], p.op, p.value, opts.epsilon)) continue;
          bool clean = true;
          for (size_t t1 = w.lo; t1 < t && clean; ++t1)
            if (compare(s.value[t1], p.op, p.value, opts.epsilon)) clean = false;
          if (clean)
            return make("d_not_becomes",
                        RecordWithValues{s.time[t],
                                         {{signal_key(*p.signal), s.value[t]}}});
        }
        return std::nullopt;
      }
      case Pattern::Kind::spike:
      case Pattern::Kind::oscillation: {
        Window w = pattern_window(trace, *p.signal, iv);
        if (w.empty) return std::nullopt;
        const auto& s = w.track;
        const bool is_spike = p.kind == Pattern::Kind::spike;
        auto instances = is_spike ? spike_instances(s, w.lo, w.hi)
                                  : oscillation_instances(s, w.lo, w.hi);
        std::optional<ShapeInstance> found;
        for (const auto& inst : instances) {
          if (is_spike) {
            if (p.width && !compare(instance_width(s, inst), p.width->op,
                                    p.width->value, opts.epsilon))
              continue;
            if (p.amplitude &&
                !compare(instance_amplitude(s, inst), p.amplitude->op,
                         p.amplitude->value, opts.epsilon))
              continue;
          } else {
            if (p.period && !compare(instance_period(s, inst), p.period->op,
                                     p.period->value, opts.epsilon))
              continue;
            if (p.p2p_amp &&
                !(compare(instance_p2p_left(s, inst), p.p2p_amp->op,
                          p.p2p_amp->value, opts.epsilon) &&
                  compare(instance_p2p_right(s, inst), p.p2p_amp->op,
                          p.p2p_amp->value, opts.epsilon)))
              continue;
          }
          if (!found || s.time[inst.u] < s.time[found->u] ||
              (s.time[inst.u] == s.time[found->u] &&
               s.time[inst.w] < s.time[found->w]))
            found = inst;
        }
        if (!found) return std::nullopt;
        return make(is_spike ? "d_not_spike" : "d_not_oscillation",
                    RecordPairPayload{record_of(s, found->u),
                                      record_of(s, found->w)},
                    found->polarity);
      }
      case Pattern::Kind::rises:
      case Pattern::Kind::falls: {
        Window w = pattern_window(trace, *p.signal, iv);
        if (w.empty) return std::nullopt;
        const auto& s = w.track;
        const bool up = p.kind == Pattern::Kind::rises;
        for (size_t t = w.lo; t <= w.hi; ++t) {
          if (s.time[t] <= iv.lower) continue;
          bool reached = up ? s.value[t] >= p.value : s.value[t] <= p.value;
          if (!reached) continue;
          bool clean = true;
          for (size_t t1 = w.lo; t1 < t && clean; ++t1) {
            bool below = up ? s.value[t1] < p.value : s.value[t1] > p.value;
            if (!below) clean = false;
          }
          if (!clean) break;
          if (p.monotonic) {
            bool mono = up ? strictly_increasing(s, w.lo, t)
                           : strictly_decreasing(s, w.lo, t);
            if (!mono) break;
          }
          return make("d_not_rises",
                      RecordWithValues{s.time[t],
                                       {{signal_key(*p.signal), s.value[t]}}});
        }
        return std::nullopt;
      }
      case Pattern::Kind::overshoots:
      case Pattern::Kind::undershoots: {
        Window w = pattern_window(trace, *p.signal, iv);
        if (w.empty) return std::nullopt;
        const auto& s = w.track;
        const bool up = p.kind == Pattern::Kind::overshoots;
        const double limit = up ? p.target + p.margin : p.target - p.margin;
        for (size_t t = w.lo; t <= w.hi; ++t) {
          if (s.time[t] <= iv.lower) continue;
          bool crossed = up ? s.value[t] >= p.target : s.value[t] <= p.target;
          if (!crossed) continue;
          bool bounded = true;
          for (size_t t1 = t; t1 <= w.hi && bounded; ++t1)
            if (up ? s.value[t1] > limit : s.value[t1] < limit) bounded = false;
          bool clean = true;
          for (size_t t2 = w.lo; t2 < t && clean; ++t2) {
            bool below = up ? s.value[t2] < p.target : s.value[t2] > p.target;
            if (!below) clean = false;
          }
          if (!clean) break;
          if (!bounded) continue;
          if (p.monotonic) {
            bool mono = up ? strictly_increasing(s, w.lo, t)
                           : strictly_decreasing(s, w.lo, t);
            if (!mono) continue;
          }
          return make("d_not_overshoots",
                      RecordWithValues{s.time[t],
                                       {{signal_key(*p.signal), s.value[t]}}});
        }
        return std::nullopt;
      }
      case Pattern::Kind::if_then: {
        IndexWindow w = index_window(trace, iv);
        if (w.empty) return std::nullopt;
        auto window = [&](size_t i, size_t j) {
          return EvaluationInterval{trace.timestamp(i), trace.timestamp(j)};
        };
        auto gap_ok = [&](double gap) {
          if (!p.within) return true;
          switch (*p.within) {
            case WithinBound::exactly: return gap == p.within_bound;
            case WithinBound::at_most: return gap <= p.within_bound;
            case WithinBound::at_least: return gap >= p.within_bound;
          }
          return false;
        };
        for (size_t i = w.lo; i <= w.hi; ++i) {
          if (trace.timestamp(i) >= iv.upper) break;
          for (size_t j = i + 1; j <= w.hi; ++j) {
            if (trace.timestamp(j) >= iv.upper) break;
            if (!eval_pattern(trace, window(i, j), *p.trigger, opts)) continue;
            for (size_t k = j; k <= w.hi; ++k)
              for (size_t l = k + 1; l <= w.hi; ++l) {
                if (!eval_pattern(trace, window(k, l), *p.response, opts))
                  continue;
                if (!gap_ok(trace.timestamp(k) - trace.timestamp(j))) continue;
                return make("d_not_if_then",
                            IntervalAndBoundaries{window(i, j),
                                                  trace.timestamp(k),
                                                  trace.timestamp(l)});
              }
          }
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<DiagnosisInstance> build_diagnosis(const Trace& trace,
                                                 const CauseBinding& binding,
                                                 const EvalOptions& opts) {
  Builder builder{trace, binding, opts};
  switch (binding.id.family) {
    case CauseFamily::negation: return builder.negation();
    case CauseFamily::a_at:
    case CauseFamily::a_bef:
    case CauseFamily::a_aft:
    case CauseFamily::a_bet:
      return builder.absolute_boundary();
    case CauseFamily::e_bef:
    case CauseFamily::e_aft:
    case CauseFamily::e_bet:
      return builder.event_boundary();
    case CauseFamily::assertion: return builder.assertion();
    case CauseFamily::becomes: return builder.becomes();
    case CauseFamily::spike: return builder.spike();
    case CauseFamily::oscillation: return builder.oscillation();
    case CauseFamily::rises: return builder.rises();
    case CauseFamily::overshoots: return builder.overshoots();
    case CauseFamily::if_then: return builder.if_then();
  }
  return std::nullopt;
}

}  // namespace sigdiag
