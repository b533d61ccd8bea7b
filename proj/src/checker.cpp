#include "sigdiag/checker.hpp"

#include <cmath>

namespace sigdiag {

bool compare(double lhs, CmpOp op, double rhs, double epsilon) {
  switch (op) {
    case CmpOp::lt: return lhs < rhs;
    case CmpOp::gt: return lhs > rhs;
    case CmpOp::eq: return std::fabs(lhs - rhs) <= epsilon;
    case CmpOp::neq: return std::fabs(lhs - rhs) > epsilon;
    case CmpOp::le: return lhs <= rhs;
    case CmpOp::ge: return lhs >= rhs;
  }
  return false;
}

bool eval_condition(const Trace& trace, size_t record_index,
                    const Condition& condition, const EvalOptions& opts) {
  switch (condition.kind) {
    case Condition::Kind::cmp:
      return compare(signal_value_at(trace, *condition.signal, record_index),
                     condition.op, condition.value, opts.epsilon);
    case Condition::Kind::conj:
      return eval_condition(trace, record_index, *condition.lhs, opts) &&
             eval_condition(trace, record_index, *condition.rhs, opts);
    case Condition::Kind::disj:
      return eval_condition(trace, record_index, *condition.lhs, opts) ||
             eval_condition(trace, record_index, *condition.rhs, opts);
  }
  return false;
}

namespace {

// Index range of samples with lower <= t <= upper; strict variants select
// samples strictly beyond a bound.
struct Range {
  size_t lo = 0;
  size_t hi = 0;  // one past the end
  bool empty() const { return lo >= hi; }
};

Range closed_range(const Trace& trace, double lower, double upper) {
  return {trace.lower_bound(lower), trace.upper_bound(upper)};
}

bool eval_becomes(const Trace& trace, const EvaluationInterval& iv,
                  const Pattern& p, const EvalOptions& opts) {
  Range r = closed_range(trace, iv.lower, iv.upper);
  if (r.empty()) return false;
  SignalTrack s = track_of(trace, *p.signal);
  for (size_t t = r.lo; t < r.hi; ++t) {
    if (trace.timestamp(t) <= iv.lower) continue;  // t in (t_l, t_u]
    if (!compare(s.value[t], p.op, p.value, opts.epsilon)) continue;
    bool clean = true;
    for (size_t t1 = r.lo; t1 < t; ++t1) {
      if (compare(s.value[t1], p.op, p.value, opts.epsilon)) {
        clean = false;
        break;
      }
    }
    if (clean) return true;
  }
  return false;
}

// rises/falls share one implementation; `up` selects the direction.
bool eval_rises(const Trace& trace, const EvaluationInterval& iv,
                const Pattern& p, bool up, const EvalOptions&) {
  Range r = closed_range(trace, iv.lower, iv.upper);
  if (r.empty()) return false;
  SignalTrack s = track_of(trace, *p.signal);
  for (size_t t = r.lo; t < r.hi; ++t) {
    if (trace.timestamp(t) <= iv.lower) continue;
    bool reached = up ? s.value[t] >= p.value : s.value[t] <= p.value;
    if (!reached) continue;
    bool clean = true;
    for (size_t t1 = r.lo; t1 < t; ++t1) {
      bool below = up ? s.value[t1] < p.value : s.value[t1] > p.value;
      if (!below) {
        clean = false;
        break;
      }
    }
    if (!clean) continue;
    if (p.monotonic) {
      bool mono = up ? strictly_increasing(s, r.lo, t)
                     : strictly_decreasing(s, r.lo, t);
      if (!mono) continue;
    }
    return true;
  }
  return false;
}

bool eval_overshoots(const Trace& trace, const EvaluationInterval& iv,
                     const Pattern& p, bool up, const EvalOptions&) {
  Range r = closed_range(trace, iv.lower, iv.upper);
  if (r.empty()) return false;
  SignalTrack s = track_of(trace, *p.signal);
  double limit = up ? p.target + p.margin : p.target - p.margin;
  for (size_t t = r.lo; t < r.hi; ++t) {
    if (trace.timestamp(t) <= iv.lower) continue;
    bool crossed = up ? s.value[t] >= p.target : s.value[t] <= p.target;
    if (!crossed) continue;
    bool bounded = true;
    for (size_t t1 = t; t1 < r.hi; ++t1) {
      bool ok = up ? s.value[t1] <= limit : s.value[t1] >= limit;
      if (!ok) {
        bounded = false;
        break;
      }
    }
    if (!bounded) continue;
    bool clean = true;
    for (size_t t2 = r.lo; t2 < t; ++t2) {
      bool below = up ? s.value[t2] < p.target : s.value[t2] > p.target;
      if (!below) {
        clean = false;
        break;
      }
    }
    if (!clean) continue;
    if (p.monotonic) {
      bool mono = up ? strictly_increasing(s, r.lo, t)
                     : strictly_decreasing(s, r.lo, t);
      if (!mono) continue;
    }
    return true;
  }
  return false;
}

bool eval_spike(const Trace& trace, const EvaluationInterval& iv,
                const Pattern& p, const EvalOptions& opts) {
  IndexWindow w = index_window(trace, iv);
  if (w.empty || w.count() < 3) return false;
  SignalTrack s = track_of(trace, *p.signal);
  for (const auto& inst : spike_instances(s, w.lo, w.hi)) {
    if (p.width &&
        !compare(instance_width(s, inst), p.width->op, p.width->value,
                 opts.epsilon))
      continue;
    if (p.amplitude &&
        !compare(instance_amplitude(s, inst), p.amplitude->op,
                 p.amplitude->value, opts.epsilon))
      continue;
    return true;
  }
  return false;
}

bool eval_oscillation(const Trace& trace, const EvaluationInterval& iv,
                      const Pattern& p, const EvalOptions& opts) {
  IndexWindow w = index_window(trace, iv);
  if (w.empty || w.count() < 5) return false;
  SignalTrack s = track_of(trace, *p.signal);
  for (const auto& inst : oscillation_instances(s, w.lo, w.hi)) {
    if (p.period &&
        !compare(instance_period(s, inst), p.period->op, p.period->value,
                 opts.epsilon))
      continue;
    if (p.p2p_amp) {
      bool both = compare(instance_p2p_left(s, inst), p.p2p_amp->op,
                          p.p2p_amp->value, opts.epsilon) &&
                  compare(instance_p2p_right(s, inst), p.p2p_amp->op,
                          p.p2p_amp->value, opts.epsilon);
      if (!both) continue;
    }
    return true;
  }
  return false;
}

bool within_ok(const Pattern& p, double gap) {
  if (!p.within) return true;
  switch (*p.within) {
    case WithinBound::exactly: return gap == p.within_bound;
    case WithinBound::at_most: return gap <= p.within_bound;
    case WithinBound::at_least: return gap >= p.within_bound;
  }
  return false;
}

bool eval_if_then(const Trace& trace, const EvaluationInterval& iv,
                  const Pattern& p, const EvalOptions& opts) {
  Range r = closed_range(trace, iv.lower, iv.upper);
  if (r.empty()) return true;
  // Trigger windows draw from [t_l, t_u), response windows from [t2, t_u].
  for (size_t i = r.lo; i < r.hi; ++i) {
    if (trace.timestamp(i) >= iv.upper) break;
    for (size_t j = i + 1; j < r.hi; ++j) {
      if (trace.timestamp(j) >= iv.upper) break;
      EvaluationInterval trig{trace.timestamp(i), trace.timestamp(j)};
      if (!eval_pattern(trace, trig, *p.trigger, opts)) continue;
      bool answered = false;
      for (size_t k = j; k < r.hi && !answered; ++k) {
        for (size_t l = k + 1; l < r.hi; ++l) {
          EvaluationInterval resp{trace.timestamp(k), trace.timestamp(l)};
          if (!eval_pattern(trace, resp, *p.response, opts)) continue;
          if (!within_ok(p, trace.timestamp(k) - trace.timestamp(j))) continue;
          answered = true;
          break;
        }
      }
      if (!answered) return false;
    }
  }
  return true;
}

}  // namespace

bool eval_pattern(const Trace& trace, const EvaluationInterval& interval,
                  const Pattern& pattern, const EvalOptions& opts) {
  switch (pattern.kind) {
    case Pattern::Kind::assertion: {
      Range r = closed_range(trace, interval.lower, interval.upper);
      for (size_t t = r.lo; t < r.hi; ++t)
        if (!eval_condition(trace, t, *pattern.condition, opts)) return false;
      return true;
    }
    case Pattern::Kind::becomes:
      return eval_becomes(trace, interval, pattern, opts);
    case Pattern::Kind::spike: return eval_spike(trace, interval, pattern, opts);
    case Pattern::Kind::oscillation:
      return eval_oscillation(trace, interval, pattern, opts);
    case Pattern::Kind::rises:
      return eval_rises(trace, interval, pattern, true, opts);
    case Pattern::Kind::falls:
      return eval_rises(trace, interval, pattern, false, opts);
    case Pattern::Kind::overshoots:
      return eval_overshoots(trace, interval, pattern, true, opts);
    case Pattern::Kind::undershoots:
      return eval_overshoots(trace, interval, pattern, false, opts);
    case Pattern::Kind::if_then:
      return eval_if_then(trace, interval, pattern, opts);
  }
  return false;
}

EvaluationInterval derived_interval(const Trace& trace, const Scope& scope) {
  double ti = trace.t_initial();
  double te = trace.t_end();
  switch (scope.kind) {
    case Scope::Kind::globally: return {ti, te};
    case Scope::Kind::before_t:
      if (ti < scope.t1 && scope.t1 <= te) return {ti, scope.t1};
      return {ti, te};
    case Scope::Kind::after_t:
      if (ti <= scope.t1 && scope.t1 < te) return {scope.t1, te};
      return {ti, te};
    case Scope::Kind::at_t:
      if (ti <= scope.t1 && scope.t1 <= te) return {scope.t1, scope.t1};
      return {ti, te};
    case Scope::Kind::between_t:
      if (ti <= scope.t1 && scope.t1 < scope.t2 && scope.t2 <= te)
        return {scope.t1, scope.t2};
      return {ti, te};
    default: return {ti, te};
  }
}

namespace {

// Event scopes quantify candidate windows over ordered sample pairs.
bool eval_event_scope(const Trace& trace, const Scope& sc,
                      const EvalOptions& opts) {
  const size_t n = trace.size();
  auto window = [&](size_t i, size_t j) {
    return EvaluationInterval{trace.timestamp(i), trace.timestamp(j)};
  };
  switch (sc.kind) {
    case Scope::Kind::before_p: {
      // Every opener occurrence with t_i < t1 must be preceded by the body.
      for (size_t t1 = 1; t1 < n; ++t1) {
        for (size_t t2 = t1 + 1; t2 < n; ++t2) {
          if (!eval_pattern(trace, window(t1, t2), *sc.opener, opts)) continue;
          bool found = false;
          for (size_t t3 = 0; t3 + 1 < t1 && !found; ++t3)
            for (size_t t4 = t3 + 1; t4 < t1; ++t4)
              if (eval_pattern(trace, window(t3, t4), *sc.body, opts)) {
                found = true;
                break;
              }
          if (!found) return false;
        }
      }
      return true;
    }
    case Scope::Kind::after_p: {
      for (size_t t1 = 0; t1 + 1 < n; ++t1) {
        for (size_t t2 = t1 + 1; t2 + 1 < n; ++t2) {
          if (!eval_pattern(trace, window(t1, t2), *sc.opener, opts)) continue;
          bool found = false;
          for (size_t t3 = t2 + 1; t3 + 1 < n && !found; ++t3)
            for (size_t t4 = t3 + 1; t4 < n; ++t4)
              if (eval_pattern(trace, window(t3, t4), *sc.body, opts)) {
                found = true;
                break;
              }
          if (!found) return false;
        }
      }
      return true;
    }
    case Scope::Kind::between_p: {
      for (size_t t1 = 0; t1 + 3 < n; ++t1)
        for (size_t t2 = t1 + 1; t2 + 2 < n; ++t2) {
          if (!eval_pattern(trace, window(t1, t2), *sc.opener, opts)) continue;
          for (size_t t3 = t2 + 1; t3 + 1 < n; ++t3)
            for (size_t t4 = t3 + 1; t4 < n; ++t4) {
              if (!eval_pattern(trace, window(t3, t4), *sc.closer, opts))
                continue;
              if (!eval_pattern(trace, window(t2, t3), *sc.body, opts))
                return false;
            }
        }
      return true;
    }
    default: return false;
  }
}

}  // namespace

Verdict eval_scope(const Trace& trace, const Scope& scope,
                   const EvalOptions& opts) {
  double ti = trace.t_initial();
  double te = trace.t_end();
  switch (scope.kind) {
    case Scope::Kind::globally: {
      EvaluationInterval iv{ti, te};
      return {eval_pattern(trace, iv, *scope.body, opts), iv};
    }
    case Scope::Kind::before_t: {
      if (!(ti < scope.t1 && scope.t1 <= te)) return {false, {ti, te}};
      EvaluationInterval iv{ti, scope.t1};
      return {eval_pattern(trace, iv, *scope.body, opts), iv};
    }
    case Scope::Kind::after_t: {
      if (!(ti <= scope.t1 && scope.t1 < te)) return {false, {ti, te}};
      EvaluationInterval iv{scope.t1, te};
      return {eval_pattern(trace, iv, *scope.body, opts), iv};
    }
    case Scope::Kind::at_t: {
      if (!(ti <= scope.t1 && scope.t1 <= te)) return {false, {ti, te}};
      EvaluationInterval iv{scope.t1, scope.t1};
      return {eval_pattern(trace, iv, *scope.body, opts), iv};
    }
    case Scope::Kind::between_t: {
      if (!(ti <= scope.t1 && scope.t1 < scope.t2 && scope.t2 <= te))
        return {false, {ti, te}};
      EvaluationInterval iv{scope.t1, scope.t2};
      return {eval_pattern(trace, iv, *scope.body, opts), iv};
    }
    case Scope::Kind::before_p:
    case Scope::Kind::after_p:
    case Scope::Kind::between_p:
      return {eval_event_scope(trace, scope, opts), {ti, te}};
  }
  return {false, {ti, te}};
}

Verdict eval_atom(const Trace& trace, const Atom& atom, const EvalOptions& opts) {
  Verdict v = eval_scope(trace, atom.scope, opts);
  if (atom.negated) v.holds = !v.holds;
  return v;
}

Verdict eval_property(const Trace& trace, const Property& property,
                      const EvalOptions& opts) {
  bool holds = false;
  for (const auto& clause : property.clauses) {
    bool clause_holds = true;
    for (const auto& atom : clause.atoms) {
      if (!eval_atom(trace, atom, opts).holds) {
        clause_holds = false;
        break;
      }
    }
    if (clause_holds) {
      holds = true;
      break;
    }
  }
  return {holds, {trace.t_initial(), trace.t_end()}};
}

}  // namespace sigdiag
