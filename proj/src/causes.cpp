#include "sigdiag/causes.hpp"

#include <algorithm>
#include <cmath>

namespace sigdiag {

namespace {

const char* family_name(CauseFamily f) {
  switch (f) {
    case CauseFamily::negation: return "not";
    case CauseFamily::a_at: return "a_at";
    case CauseFamily::a_bef: return "a_bef";
    case CauseFamily::a_aft: return "a_aft";
    case CauseFamily::a_bet: return "a_bet";
    case CauseFamily::e_bef: return "e_bef";
    case CauseFamily::e_aft: return "e_aft";
    case CauseFamily::e_bet: return "e_bet";
    case CauseFamily::assertion: return "assert";
    case CauseFamily::becomes: return "becomes";
    case CauseFamily::spike: return "spike";
    case CauseFamily::oscillation: return "oscillation";
    case CauseFamily::rises: return "rises";
    case CauseFamily::overshoots: return "overshoots";
    case CauseFamily::if_then: return "if_then";
  }
  return "?";
}

int family_size(CauseFamily f) {
  switch (f) {
    case CauseFamily::becomes: return 3;
    case CauseFamily::spike: return 5;
    case CauseFamily::oscillation: return 7;
    case CauseFamily::rises: return 4;
    case CauseFamily::overshoots: return 4;
    case CauseFamily::if_then: return 2;
    default: return 1;
  }
}

}  // namespace

std::string to_string(const ViolationCauseId& id) {
  return std::string("c_") + family_name(id.family) + "_" + std::to_string(id.index);
}

std::optional<ViolationCauseId> cause_from_string(const std::string& name) {
  for (const auto& id : cause_catalog())
    if (to_string(id) == name) return id;
  return std::nullopt;
}

const std::vector<ViolationCauseId>& cause_catalog() {
  static const std::vector<ViolationCauseId> catalog = [] {
    std::vector<ViolationCauseId> out;
    const CauseFamily families[] = {
        CauseFamily::negation, CauseFamily::a_at,       CauseFamily::a_bef,
        CauseFamily::a_aft,    CauseFamily::a_bet,      CauseFamily::e_bef,
        CauseFamily::e_aft,    CauseFamily::e_bet,      CauseFamily::assertion,
        CauseFamily::becomes,  CauseFamily::spike,      CauseFamily::oscillation,
        CauseFamily::rises,    CauseFamily::overshoots, CauseFamily::if_then,
    };
    for (CauseFamily f : families)
      for (int i = 1; i <= family_size(f); ++i) out.push_back({f, i});
    return out;
  }();
  return catalog;
}

namespace {

std::optional<CauseFamily> scope_cause_family(Scope::Kind kind) {
  switch (kind) {
    case Scope::Kind::globally: return std::nullopt;
    case Scope::Kind::before_t: return CauseFamily::a_bef;
    case Scope::Kind::after_t: return CauseFamily::a_aft;
    case Scope::Kind::at_t: return CauseFamily::a_at;
    case Scope::Kind::between_t: return CauseFamily::a_bet;
    case Scope::Kind::before_p: return CauseFamily::e_bef;
    case Scope::Kind::after_p: return CauseFamily::e_aft;
    case Scope::Kind::between_p: return CauseFamily::e_bet;
  }
  return std::nullopt;
}

struct PatternCausePlan {
  CauseFamily family;
  std::vector<int> indices;
  bool dual = false;
};

std::optional<PatternCausePlan> pattern_cause_plan(const Pattern& p) {
  PatternCausePlan plan{CauseFamily::assertion, {}, false};
  switch (p.kind) {
    case Pattern::Kind::assertion:
      plan.family = CauseFamily::assertion;
      plan.indices = {1};
      return plan;
    case Pattern::Kind::becomes:
      plan.family = CauseFamily::becomes;
      plan.indices = {1, 2, 3};
      return plan;
    case Pattern::Kind::spike:
      plan.family = CauseFamily::spike;
      if (p.amplitude) plan.indices.push_back(1);
      if (p.width) plan.indices.push_back(2);
      plan.indices.push_back(3);
      plan.indices.push_back(4);
      plan.indices.push_back(5);
      std::sort(plan.indices.begin(), plan.indices.end());
      return plan;
    case Pattern::Kind::oscillation:
      plan.family = CauseFamily::oscillation;
      if (p.p2p_amp) plan.indices.push_back(1);
      if (p.period) plan.indices.push_back(2);
      for (int i : {3, 4, 5, 6, 7}) plan.indices.push_back(i);
      std::sort(plan.indices.begin(), plan.indices.end());
      return plan;
    case Pattern::Kind::rises:
    case Pattern::Kind::falls:
      plan.family = CauseFamily::rises;
      plan.dual = p.kind == Pattern::Kind::falls;
      plan.indices = p.monotonic ? std::vector<int>{1, 2, 3, 4}
                                 : std::vector<int>{1, 2, 4};
      return plan;
    case Pattern::Kind::overshoots:
    case Pattern::Kind::undershoots:
      plan.family = CauseFamily::overshoots;
      plan.dual = p.kind == Pattern::Kind::undershoots;
      plan.indices = p.monotonic ? std::vector<int>{1, 2, 3, 4}
                                 : std::vector<int>{1, 2, 4};
      return plan;
    case Pattern::Kind::if_then:
      plan.family = CauseFamily::if_then;
      plan.indices = p.within ? std::vector<int>{1, 2} : std::vector<int>{1};
      return plan;
  }
  return std::nullopt;
}

}  // namespace

std::vector<CauseBinding> causes_for(const Trace& trace, const Atom& atom) {
  std::vector<CauseBinding> out;
  EvaluationInterval span{trace.t_initial(), trace.t_end()};
  if (atom.negated) {
    out.push_back({{CauseFamily::negation, 1}, atom, span, false,
                   ShapePolarity::as_written});
    return out;
  }
  if (auto family = scope_cause_family(atom.scope.kind)) {
    out.push_back({{*family, 1}, atom, span, false, ShapePolarity::as_written});
  }
  EvaluationInterval iv = derived_interval(trace, atom.scope);
  if (auto plan = pattern_cause_plan(*atom.scope.body)) {
    for (int index : plan->indices)
      out.push_back({{plan->family, index}, atom, iv, plan->dual,
                     ShapePolarity::as_written});
  }
  return out;
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

bool check_scope_boundary(const Trace& trace, const CauseBinding& b) {
  double ti = trace.t_initial();
  double te = trace.t_end();
  const Scope& sc = b.atom.scope;
  switch (b.id.family) {
    case CauseFamily::a_at: return sc.t1 < ti || te < sc.t1;
    case CauseFamily::a_bef: return sc.t1 <= ti || te < sc.t1;
    case CauseFamily::a_aft: return sc.t1 < ti || te <= sc.t1;
    case CauseFamily::a_bet:
      return sc.t1 < ti || te < sc.t2 || sc.t2 <= sc.t1;
    default: return false;
  }
}

bool check_event_scope(const Trace& trace, const CauseBinding& b,
                       const EvalOptions& opts) {
  const Scope& sc = b.atom.scope;
  const size_t n = trace.size();
  auto window = [&](size_t i, size_t j) {
    return EvaluationInterval{trace.timestamp(i), trace.timestamp(j)};
  };
  auto body_holds_somewhere = [&](size_t from, size_t to_exclusive) {
    for (size_t t3 = from; t3 + 1 < to_exclusive; ++t3)
      for (size_t t4 = t3 + 1; t4 < to_exclusive; ++t4)
        if (eval_pattern(trace, window(t3, t4), *sc.body, opts)) return true;
    return false;
  };
  switch (b.id.family) {
    case CauseFamily::e_bef:
      for (size_t t1 = 1; t1 < n; ++t1)
        for (size_t t2 = t1 + 1; t2 < n; ++t2)
          if (eval_pattern(trace, window(t1, t2), *sc.opener, opts) &&
              !body_holds_somewhere(0, t1))
            return true;
      return false;
    case CauseFamily::e_aft:
      for (size_t t1 = 0; t1 + 1 < n; ++t1)
        for (size_t t2 = t1 + 1; t2 + 1 < n; ++t2)
          if (eval_pattern(trace, window(t1, t2), *sc.opener, opts)) {
            bool found = false;
            for (size_t t3 = t2 + 1; t3 + 1 < n && !found; ++t3)
              for (size_t t4 = t3 + 1; t4 < n; ++t4)
                if (eval_pattern(trace, window(t3, t4), *sc.body, opts)) {
                  found = true;
                  break;
                }
            if (!found) return true;
          }
      return false;
    case CauseFamily::e_bet:
      for (size_t t1 = 0; t1 + 3 < n; ++t1)
        for (size_t t2 = t1 + 1; t2 + 2 < n; ++t2) {
          if (!eval_pattern(trace, window(t1, t2), *sc.opener, opts)) continue;
          for (size_t t3 = t2 + 1; t3 + 1 < n; ++t3)
            for (size_t t4 = t3 + 1; t4 < n; ++t4)
              if (eval_pattern(trace, window(t3, t4), *sc.closer, opts) &&
                  !eval_pattern(trace, window(t2, t3), *sc.body, opts))
                return true;
        }
      return false;
    default: return false;
  }
}

bool check_becomes(const Trace& trace, const CauseBinding& b,
                   const EvalOptions& opts) {
  const Pattern& p = *b.atom.scope.body;
  Window w = pattern_window(trace, *p.signal, b.interval);
  if (w.empty) return false;
  const auto& s = w.track;
  auto sat = [&](size_t i) {
    return compare(s.value[i], p.op, p.value, opts.epsilon);
  };
  switch (b.id.index) {
    case 1: {  // never satisfied after the window opens
      for (size_t t = w.lo; t <= w.hi; ++t) {
        if (s.time[t] <= b.interval.lower) continue;
        if (sat(t)) return false;
      }
      return true;
    }
    case 2: {  // satisfied throughout the whole window
      for (size_t t = w.lo; t <= w.hi; ++t)
        if (!sat(t)) return false;
      return true;
    }
    case 3: {  // satisfied prefix, violated suffix
      for (size_t t = w.lo; t <= w.hi; ++t) {
        if (s.time[t] <= b.interval.lower || s.time[t] >= b.interval.upper)
          continue;
        bool ok = true;
        for (size_t t1 = w.lo; t1 < t && ok; ++t1)
          if (!sat(t1)) ok = false;
        for (size_t t2 = t + 1; t2 <= w.hi && ok; ++t2)
          if (sat(t2)) ok = false;
        if (ok) return true;
      }
      return false;
    }
  }
  return false;
}

bool check_spike(const Trace& trace, const CauseBinding& b,
                 const EvalOptions& opts) {
  const Pattern& p = *b.atom.scope.body;
  Window w = pattern_window(trace, *p.signal, b.interval);
  if (w.empty) return false;
  const auto& s = w.track;
  switch (b.id.index) {
    case 1: {
      if (!p.amplitude) return false;
      auto instances = spike_instances(s, w.lo, w.hi);
      if (instances.empty()) return false;
      for (const auto& inst : instances)
        if (compare(instance_amplitude(s, inst), p.amplitude->op,
                    p.amplitude->value, opts.epsilon))
          return false;
      return true;
    }
    case 2: {
      if (!p.width) return false;
      auto instances = spike_instances(s, w.lo, w.hi);
      if (instances.empty()) return false;
      for (const auto& inst : instances)
        if (compare(instance_width(s, inst), p.width->op, p.width->value,
                    opts.epsilon))
          return false;
      return true;
    }
    case 3: {
      for (size_t t = w.lo; t <= w.hi; ++t)
        if (std::fabs(s.value[t] - s.value[w.lo]) > opts.epsilon) return false;
      return true;
    }
    case 4: return non_increasing(s, w.lo, w.hi);
    case 5: return non_decreasing(s, w.lo, w.hi);
  }
  return false;
}

bool check_oscillation(const Trace& trace, const CauseBinding& b,
                       const EvalOptions& opts) {
  const Pattern& p = *b.atom.scope.body;
  Window w = pattern_window(trace, *p.signal, b.interval);
  if (w.empty) return false;
  const auto& s = w.track;
  switch (b.id.index) {
    case 1: {
      if (!p.p2p_amp) return false;
      auto instances = oscillation_instances(s, w.lo, w.hi);
      if (instances.empty()) return false;
      for (const auto& inst : instances) {
        bool left = compare(instance_p2p_left(s, inst), p.p2p_amp->op,
                            p.p2p_amp->value, opts.epsilon);
        bool right = compare(instance_p2p_right(s, inst), p.p2p_amp->op,
                             p.p2p_amp->value, opts.epsilon);
        if (left || right) return false;
      }
      return true;
    }
    case 2: {
      if (!p.period) return false;
      auto instances = oscillation_instances(s, w.lo, w.hi);
      if (instances.empty()) return false;
      for (const auto& inst : instances)
        if (compare(instance_period(s, inst), p.period->op, p.period->value,
                    opts.epsilon))
          return false;
      return true;
    }
    case 3: return strict_extrema(s, w.lo, w.hi).size() == 1;
    case 4: return strict_extrema(s, w.lo, w.hi).size() == 2;
    case 5: {
      for (size_t t = w.lo; t <= w.hi; ++t)
        if (std::fabs(s.value[t] - s.value[w.lo]) > opts.epsilon) return false;
      return true;
    }
    case 6: return non_increasing(s, w.lo, w.hi);
    case 7: return non_decreasing(s, w.lo, w.hi);
  }
  return false;
}

bool check_rises(const Trace& trace, const CauseBinding& b,
                 const EvalOptions&) {
  const Pattern& p = *b.atom.scope.body;
  Window w = pattern_window(trace, *p.signal, b.interval);
  if (w.empty) return false;
  const auto& s = w.track;
  const bool up = !b.dual;
  const double v = p.value;
  auto reached = [&](size_t i) { return up ? s.value[i] >= v : s.value[i] <= v; };
  auto below = [&](size_t i) { return up ? s.value[i] < v : s.value[i] > v; };
  switch (b.id.index) {
    case 1: {
      for (size_t t = w.lo; t <= w.hi; ++t)
        if (!below(t)) return false;
      return true;
    }
    case 2: {
      for (size_t t = w.lo; t <= w.hi; ++t)
        if (!reached(t)) return false;
      return true;
    }
    case 3: {
      for (size_t t = w.lo; t <= w.hi; ++t) {
        if (s.time[t] <= b.interval.lower) continue;
        if (!reached(t)) continue;
        bool clean = true;
        for (size_t t1 = w.lo; t1 < t && clean; ++t1)
          if (!below(t1)) clean = false;
        if (!clean) continue;
        bool mono = up ? strictly_increasing(s, w.lo, t)
                       : strictly_decreasing(s, w.lo, t);
        return !mono;
      }
      return false;
    }
    case 4: {
      for (size_t t = w.lo; t <= w.hi; ++t) {
        if (s.time[t] <= b.interval.lower || s.time[t] >= b.interval.upper)
          continue;
        bool ok = true;
        for (size_t t1 = w.lo; t1 < t && ok; ++t1)
          if (!reached(t1)) ok = false;
        for (size_t t2 = t; t2 <= w.hi && ok; ++t2)
          if (!below(t2)) ok = false;
        if (ok) return true;
      }
      return false;
    }
  }
  return false;
}

bool check_overshoots(const Trace& trace, const CauseBinding& b,
                      const EvalOptions&) {
  const Pattern& p = *b.atom.scope.body;
  Window w = pattern_window(trace, *p.signal, b.interval);
  if (w.empty) return false;
  const auto& s = w.track;
  const bool up = !b.dual;
  const double v1 = p.target;
  const double limit = up ? p.target + p.margin : p.target - p.margin;
  auto within_band = [&](size_t i) {
    return up ? (s.value[i] >= v1 && s.value[i] <= limit)
              : (s.value[i] <= v1 && s.value[i] >= limit);
  };
  auto under = [&](size_t i) { return up ? s.value[i] < v1 : s.value[i] > v1; };
  auto beyond_limit = [&](size_t i) {
    return up ? s.value[i] > limit : s.value[i] < limit;
  };
  auto within_limit = [&](size_t i) {
    return up ? s.value[i] <= limit : s.value[i] >= limit;
  };
  switch (b.id.index) {
    case 1: {
      for (size_t t = w.lo; t <= w.hi; ++t)
        if (!under(t)) return false;
      return true;
    }
    case 2: {
      for (size_t t = w.lo; t <= w.hi; ++t) {
        if (!beyond_limit(t)) continue;
        bool stays = true;
        for (size_t t1 = t + 1; t1 <= w.hi && stays; ++t1)
          if (!beyond_limit(t1)) stays = false;
        if (stays) return true;
      }
      return false;
    }
    case 3: {
      for (size_t t = w.lo; t <= w.hi; ++t) {
        if (s.time[t] <= b.interval.lower) continue;
        if (!within_band(t)) continue;
        bool history = true;
        for (size_t t2 = w.lo; t2 < t && history; ++t2)
          if (up ? s.value[t2] > v1 : s.value[t2] < v1) history = false;
        if (!history) continue;
        bool bounded = true;
        for (size_t t1 = t + 1; t1 <= w.hi && bounded; ++t1)
          if (!within_limit(t1)) bounded = false;
        if (!bounded) continue;
        bool mono = up ? strictly_increasing(s, w.lo, t)
                       : strictly_decreasing(s, w.lo, t);
        if (!mono) return true;
      }
      return false;
    }
    case 4: {
      for (size_t t = w.lo; t <= w.hi; ++t) {
        if (s.time[t] <= b.interval.lower) continue;
        bool prefix = true;
        for (size_t t1 = w.lo; t1 <= t && prefix; ++t1)
          if (!within_band(t1)) prefix = false;
        if (!prefix) continue;
        bool suffix = true;
        for (size_t t2 = t + 1; t2 <= w.hi && suffix; ++t2)
          if (!under(t2)) suffix = false;
        if (suffix) return true;
      }
      return false;
    }
  }
  return false;
}

bool check_if_then(const Trace& trace, const CauseBinding& b,
                   const EvalOptions& opts) {
  const Pattern& p = *b.atom.scope.body;
  IndexWindow w = index_window(trace, b.interval);
  if (w.empty) return false;
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
    if (trace.timestamp(i) >= b.interval.upper) break;
    for (size_t j = i + 1; j <= w.hi; ++j) {
      if (trace.timestamp(j) >= b.interval.upper) break;
      if (!eval_pattern(trace, window(i, j), *p.trigger, opts)) continue;
      bool witness = true;
      for (size_t k = j; k <= w.hi && witness; ++k)
        for (size_t l = k + 1; l <= w.hi; ++l) {
          if (!eval_pattern(trace, window(k, l), *p.response, opts)) continue;
          bool bad = b.id.index == 1 ||
                     gap_ok(trace.timestamp(k) - trace.timestamp(j));
          if (bad) {
            witness = false;
            break;
          }
        }
      if (witness) return true;
    }
  }
  return false;
}

}  // namespace

bool check_cause(const Trace& trace, const CauseBinding& binding,
                 const EvalOptions& opts) {
  switch (binding.id.family) {
    case CauseFamily::negation:
      return eval_scope(trace, binding.atom.scope, opts).holds;
    case CauseFamily::a_at:
    case CauseFamily::a_bef:
    case CauseFamily::a_aft:
    case CauseFamily::a_bet:
      return check_scope_boundary(trace, binding);
    case CauseFamily::e_bef:
    case CauseFamily::e_aft:
    case CauseFamily::e_bet:
      return check_event_scope(trace, binding, opts);
    case CauseFamily::assertion: {
      IndexWindow w = index_window(trace, binding.interval);
      if (w.empty) return false;
      for (size_t t = w.lo; t <= w.hi; ++t)
        if (!eval_condition(trace, t, *binding.atom.scope.body->condition, opts))
          return true;
      return false;
    }
    case CauseFamily::becomes: return check_becomes(trace, binding, opts);
    case CauseFamily::spike: return check_spike(trace, binding, opts);
    case CauseFamily::oscillation:
      return check_oscillation(trace, binding, opts);
    case CauseFamily::rises: return check_rises(trace, binding, opts);
    case CauseFamily::overshoots:
      return check_overshoots(trace, binding, opts);
    case CauseFamily::if_then: return check_if_then(trace, binding, opts);
  }
  return false;
}

}  // namespace sigdiag
