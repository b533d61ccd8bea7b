#include "sigdiag/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sigdiag/parser.hpp"

namespace sigdiag {

// ---------------------------------------------------------------------------
// Naive evaluator
// ---------------------------------------------------------------------------

namespace {

struct NaiveCtx {
  const Trace& trace;
  double eps;
};

double nv_expr(const NaiveCtx& ctx, const SignalExpr& e, size_t i) {
  switch (e.kind) {
    case SignalExpr::Kind::variable: return ctx.trace.value(i, e.name);
    case SignalExpr::Kind::constant: return e.value;
    case SignalExpr::Kind::binary: {
      double l = nv_expr(ctx, *e.lhs, i);
      double r = nv_expr(ctx, *e.rhs, i);
      if (e.op == '+') return l + r;
      if (e.op == '-') return l - r;
      if (e.op == '*') return l * r;
      return l / r;
    }
  }
  return 0;
}

bool nv_cmp(const NaiveCtx& ctx, double a, CmpOp op, double b) {
  switch (op) {
    case CmpOp::lt: return a < b;
    case CmpOp::gt: return a > b;
    case CmpOp::eq: return std::fabs(a - b) <= ctx.eps;
    case CmpOp::neq: return std::fabs(a - b) > ctx.eps;
    case CmpOp::le: return a <= b;
    case CmpOp::ge: return a >= b;
  }
  return false;
}

bool nv_condition(const NaiveCtx& ctx, const Condition& c, size_t i) {
  if (c.kind == Condition::Kind::cmp)
    return nv_cmp(ctx, nv_expr(ctx, *c.signal, i), c.op, c.value);
  bool l = nv_condition(ctx, *c.lhs, i);
  bool r = nv_condition(ctx, *c.rhs, i);
  return c.kind == Condition::Kind::conj ? (l && r) : (l || r);
}

bool nv_pattern(const NaiveCtx& ctx, double lo, double hi, const Pattern& p);

// All sample indices with lo <= t <= hi.
std::vector<size_t> nv_window(const NaiveCtx& ctx, double lo, double hi) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < ctx.trace.size(); ++i) {
    double t = ctx.trace.timestamp(i);
    if (t >= lo && t <= hi) idx.push_back(i);
  }
  return idx;
}

bool nv_pairwise_strict(const NaiveCtx& ctx, const SignalExpr& e,
                        const std::vector<size_t>& idx, size_t a, size_t b,
                        bool increasing) {
  for (size_t i = a; i < b; ++i)
    for (size_t j = i + 1; j <= b; ++j) {
      double x = nv_expr(ctx, e, idx[i]);
      double y = nv_expr(ctx, e, idx[j]);
      if (increasing ? !(x < y) : !(x > y)) return false;
    }
  return true;
}

// Spike occurrence around positions (a, p, b) of the window, `up` meaning a
// strict maximum between two (possibly boundary) minima.
bool nv_spike_at(const NaiveCtx& ctx, const SignalExpr& e,
                 const std::vector<size_t>& idx, size_t a, size_t p, size_t b,
                 bool up) {
  if (!(a < p && p < b)) return false;
  if (!nv_pairwise_strict(ctx, e, idx, a, p, up)) return false;
  if (!nv_pairwise_strict(ctx, e, idx, p, b, !up)) return false;
  auto val = [&](size_t k) { return nv_expr(ctx, e, idx[k]); };
  if (a > 0) {
    double prev = val(a - 1);
    if (up ? prev < val(a) : prev > val(a)) return false;
  }
  if (b + 1 < idx.size()) {
    double next = val(b + 1);
    if (up ? next < val(b) : next > val(b)) return false;
  }
  return true;
}

// Oscillation occurrence: all three extrema strict with real outer flanks.
bool nv_osc_at(const NaiveCtx& ctx, const SignalExpr& e,
               const std::vector<size_t>& idx, size_t a, size_t p, size_t b,
               bool up) {
  if (!(a < p && p < b)) return false;
  if (a == 0 || b + 1 >= idx.size()) return false;
  if (!nv_pairwise_strict(ctx, e, idx, a, p, up)) return false;
  if (!nv_pairwise_strict(ctx, e, idx, p, b, !up)) return false;
  auto val = [&](size_t k) { return nv_expr(ctx, e, idx[k]); };
  if (up ? !(val(a - 1) > val(a)) : !(val(a - 1) < val(a))) return false;
  if (up ? !(val(b + 1) > val(b)) : !(val(b + 1) < val(b))) return false;
  return true;
}

bool nv_spike(const NaiveCtx& ctx, double lo, double hi, const Pattern& p) {
  auto idx = nv_window(ctx, lo, hi);
  auto time = [&](size_t k) { return ctx.trace.timestamp(idx[k]); };
  auto val = [&](size_t k) { return nv_expr(ctx, *p.signal, idx[k]); };
  for (bool up : {true, false})
    for (size_t a = 0; a + 2 < idx.size() + 0; ++a)
      for (size_t q = a + 1; q + 1 < idx.size(); ++q)
        for (size_t b = q + 1; b < idx.size(); ++b) {
          if (!nv_spike_at(ctx, *p.signal, idx, a, q, b, up)) continue;
          if (p.width &&
              !nv_cmp(ctx, time(b) - time(a), p.width->op, p.width->value))
            continue;
          if (p.amplitude) {
            double amp = std::max(std::fabs(val(q) - val(a)),
                                  std::fabs(val(q) - val(b)));
            if (!nv_cmp(ctx, amp, p.amplitude->op, p.amplitude->value))
              continue;
          }
          return true;
        }
  return false;
}

bool nv_oscillation(const NaiveCtx& ctx, double lo, double hi,
                    const Pattern& p) {
  auto idx = nv_window(ctx, lo, hi);
  auto time = [&](size_t k) { return ctx.trace.timestamp(idx[k]); };
  auto val = [&](size_t k) { return nv_expr(ctx, *p.signal, idx[k]); };
  for (bool up : {true, false})
    for (size_t a = 0; a + 2 < idx.size() + 0; ++a)
      for (size_t q = a + 1; q + 1 < idx.size(); ++q)
        for (size_t b = q + 1; b < idx.size(); ++b) {
          if (!nv_osc_at(ctx, *p.signal, idx, a, q, b, up)) continue;
          if (p.period &&
              !nv_cmp(ctx, time(b) - time(a), p.period->op, p.period->value))
            continue;
          if (p.p2p_amp) {
            double left = std::fabs(val(a) - val(q));
            double right = std::fabs(val(q) - val(b));
            if (!nv_cmp(ctx, left, p.p2p_amp->op, p.p2p_amp->value)) continue;
            if (!nv_cmp(ctx, right, p.p2p_amp->op, p.p2p_amp->value)) continue;
          }
          return true;
        }
  return false;
}

bool nv_mon(const NaiveCtx& ctx, const SignalExpr& e,
            const std::vector<size_t>& idx, size_t upto, bool increasing) {
  for (size_t i = 0; i < upto; ++i)
    for (size_t j = i + 1; j <= upto; ++j) {
      double x = nv_expr(ctx, e, idx[i]);
      double y = nv_expr(ctx, e, idx[j]);
      if (increasing ? !(x < y) : !(x > y)) return false;
    }
  return true;
}

bool nv_pattern(const NaiveCtx& ctx, double lo, double hi, const Pattern& p) {
  auto idx = nv_window(ctx, lo, hi);
  switch (p.kind) {
    case Pattern::Kind::assertion: {
      for (size_t k : idx)
        if (!nv_condition(ctx, *p.condition, k)) return false;
      return true;
    }
    case Pattern::Kind::becomes: {
      for (size_t i = 0; i < idx.size(); ++i) {
        if (ctx.trace.timestamp(idx[i]) <= lo) continue;
        if (!nv_cmp(ctx, nv_expr(ctx, *p.signal, idx[i]), p.op, p.value))
          continue;
        bool history_clear = true;
        for (size_t j = 0; j < i; ++j)
          if (nv_cmp(ctx, nv_expr(ctx, *p.signal, idx[j]), p.op, p.value))
            history_clear = false;
        if (history_clear) return true;
      }
      return false;
    }
    case Pattern::Kind::rises:
    case Pattern::Kind::falls: {
      bool up = p.kind == Pattern::Kind::rises;
      for (size_t i = 0; i < idx.size(); ++i) {
        if (ctx.trace.timestamp(idx[i]) <= lo) continue;
        double v = nv_expr(ctx, *p.signal, idx[i]);
        if (up ? !(v >= p.value) : !(v <= p.value)) continue;
        bool ok = true;
        for (size_t j = 0; j < i && ok; ++j) {
          double w = nv_expr(ctx, *p.signal, idx[j]);
          if (up ? !(w < p.value) : !(w > p.value)) ok = false;
        }
        if (ok && p.monotonic && !nv_mon(ctx, *p.signal, idx, i, up)) ok = false;
        if (ok) return true;
      }
      return false;
    }
    case Pattern::Kind::overshoots:
    case Pattern::Kind::undershoots: {
      bool up = p.kind == Pattern::Kind::overshoots;
      double limit = up ? p.target + p.margin : p.target - p.margin;
      for (size_t i = 0; i < idx.size(); ++i) {
        if (ctx.trace.timestamp(idx[i]) <= lo) continue;
        double v = nv_expr(ctx, *p.signal, idx[i]);
        if (up ? !(v >= p.target) : !(v <= p.target)) continue;
        bool ok = true;
        for (size_t j = i; j < idx.size() && ok; ++j) {
          double w = nv_expr(ctx, *p.signal, idx[j]);
          if (up ? !(w <= limit) : !(w >= limit)) ok = false;
        }
        for (size_t j = 0; j < i && ok; ++j) {
          double w = nv_expr(ctx, *p.signal, idx[j]);
          if (up ? !(w < p.target) : !(w > p.target)) ok = false;
        }
        if (ok && p.monotonic && !nv_mon(ctx, *p.signal, idx, i, up)) ok = false;
        if (ok) return true;
      }
      return false;
    }
    case Pattern::Kind::spike: return nv_spike(ctx, lo, hi, p);
    case Pattern::Kind::oscillation: return nv_oscillation(ctx, lo, hi, p);
    case Pattern::Kind::if_then: {
      for (size_t i = 0; i < idx.size(); ++i) {
        if (ctx.trace.timestamp(idx[i]) >= hi) continue;
        for (size_t j = i + 1; j < idx.size(); ++j) {
          if (ctx.trace.timestamp(idx[j]) >= hi) continue;
          if (!nv_pattern(ctx, ctx.trace.timestamp(idx[i]),
                          ctx.trace.timestamp(idx[j]), *p.trigger))
            continue;
          bool answered = false;
          for (size_t k = j; k < idx.size() && !answered; ++k)
            for (size_t l = k + 1; l < idx.size(); ++l) {
              if (!nv_pattern(ctx, ctx.trace.timestamp(idx[k]),
                              ctx.trace.timestamp(idx[l]), *p.response))
                continue;
              double gap = ctx.trace.timestamp(idx[k]) - ctx.trace.timestamp(idx[j]);
              bool gap_ok = true;
              if (p.within) {
                if (*p.within == WithinBound::exactly)
                  gap_ok = gap == p.within_bound;
                else if (*p.within == WithinBound::at_most)
                  gap_ok = gap <= p.within_bound;
                else
                  gap_ok = gap >= p.within_bound;
              }
              if (gap_ok) {
                answered = true;
                break;
              }
            }
          if (!answered) return false;
        }
      }
      return true;
    }
  }
  return false;
}

bool nv_scope(const NaiveCtx& ctx, const Scope& sc) {
  double ti = ctx.trace.t_initial();
  double te = ctx.trace.t_end();
  const size_t n = ctx.trace.size();
  auto tstamp = [&](size_t i) { return ctx.trace.timestamp(i); };
  switch (sc.kind) {
    case Scope::Kind::globally: return nv_pattern(ctx, ti, te, *sc.body);
    case Scope::Kind::before_t:
      return ti < sc.t1 && sc.t1 <= te && nv_pattern(ctx, ti, sc.t1, *sc.body);
    case Scope::Kind::after_t:
      return ti <= sc.t1 && sc.t1 < te && nv_pattern(ctx, sc.t1, te, *sc.body);
    case Scope::Kind::at_t:
      return ti <= sc.t1 && sc.t1 <= te &&
             nv_pattern(ctx, sc.t1, sc.t1, *sc.body);
    case Scope::Kind::between_t:
      return ti <= sc.t1 && sc.t1 < sc.t2 && sc.t2 <= te &&
             nv_pattern(ctx, sc.t1, sc.t2, *sc.body);
    case Scope::Kind::before_p: {
      for (size_t t1 = 0; t1 < n; ++t1) {
        if (!(ti < tstamp(t1))) continue;
        for (size_t t2 = t1 + 1; t2 < n; ++t2) {
          if (!nv_pattern(ctx, tstamp(t1), tstamp(t2), *sc.opener)) continue;
          bool found = false;
          for (size_t t3 = 0; t3 < t1 && !found; ++t3)
            for (size_t t4 = t3 + 1; t4 < n; ++t4) {
              if (!(tstamp(t4) < tstamp(t1))) break;
              if (nv_pattern(ctx, tstamp(t3), tstamp(t4), *sc.body)) {
                found = true;
                break;
              }
            }
          if (!found) return false;
        }
      }
      return true;
    }
    case Scope::Kind::after_p: {
      for (size_t t1 = 0; t1 < n; ++t1)
        for (size_t t2 = t1 + 1; t2 < n; ++t2) {
          if (!(tstamp(t2) < te)) continue;
          if (!nv_pattern(ctx, tstamp(t1), tstamp(t2), *sc.opener)) continue;
          bool found = false;
          for (size_t t3 = t2 + 1; t3 < n && !found; ++t3)
            for (size_t t4 = t3 + 1; t4 < n; ++t4)
              if (nv_pattern(ctx, tstamp(t3), tstamp(t4), *sc.body)) {
                found = true;
                break;
              }
          if (!found) return false;
        }
      return true;
    }
    case Scope::Kind::between_p: {
      for (size_t t1 = 0; t1 < n; ++t1)
        for (size_t t2 = t1 + 1; t2 < n; ++t2) {
          if (!nv_pattern(ctx, tstamp(t1), tstamp(t2), *sc.opener)) continue;
          for (size_t t3 = t2 + 1; t3 < n; ++t3)
            for (size_t t4 = t3 + 1; t4 < n; ++t4) {
              if (!nv_pattern(ctx, tstamp(t3), tstamp(t4), *sc.closer))
                continue;
              if (!nv_pattern(ctx, tstamp(t2), tstamp(t3), *sc.body))
                return false;
            }
        }
      return true;
    }
  }
  return false;
}

}  // namespace

bool naive_eval_pattern(const Trace& trace, const EvaluationInterval& interval,
                        const Pattern& pattern, double epsilon,
                        size_t size_bound) {
  if (trace.size() > size_bound)
    throw std::runtime_error("naive evaluation bound exceeded");
  NaiveCtx ctx{trace, epsilon};
  return nv_pattern(ctx, interval.lower, interval.upper, pattern);
}

bool naive_eval(const Trace& trace, const Atom& atom, double epsilon,
                size_t size_bound) {
  if (trace.size() > size_bound)
    throw std::runtime_error("naive evaluation bound exceeded");
  NaiveCtx ctx{trace, epsilon};
  bool holds = nv_scope(ctx, atom.scope);
  return atom.negated ? !holds : holds;
}

// ---------------------------------------------------------------------------
// Trace generation
// ---------------------------------------------------------------------------

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) / 9007199254740992.0);
}

Trace from_values(const std::vector<double>& values, double step = 0.5,
                  const std::string& var = "s") {
  std::vector<Record> records;
  for (size_t i = 0; i < values.size(); ++i) {
    Record r;
    r.timestamp = static_cast<double>(i) * step;
    r.values[var] = values[i];
    records.push_back(std::move(r));
  }
  return Trace(std::move(records), {var});
}

Trace from_columns(const std::vector<std::pair<std::string, std::vector<double>>>& cols,
                   double step = 0.5) {
  std::vector<Record> records;
  size_t n = cols.front().second.size();
  for (size_t i = 0; i < n; ++i) {
    Record r;
    r.timestamp = static_cast<double>(i) * step;
    for (const auto& [name, values] : cols) r.values[name] = values[i];
    records.push_back(std::move(r));
  }
  std::vector<std::string> names;
  for (const auto& [name, values] : cols) names.push_back(name);
  return Trace(std::move(records), std::move(names));
}

std::vector<double> strictly_monotone(std::mt19937_64& rng, int n, double from,
                                      bool increasing) {
  std::vector<double> out;
  double v = from;
  for (int i = 0; i < n; ++i) {
    out.push_back(v);
    double delta = uniform(rng, 0.5, 8.0);
    v += increasing ? delta : -delta;
  }
  return out;
}

int require_records(const GeneratorSpec& spec, int minimum) {
  if (spec.n_records < minimum)
    throw std::invalid_argument("shape needs at least " +
                                std::to_string(minimum) + " records");
  return spec.n_records;
}

Trace generate_shape(const GeneratorSpec& spec, std::mt19937_64& rng) {
  switch (spec.shape) {
    case GeneratorSpec::Shape::constant: {
      int n = require_records(spec, 1);
      return from_values(std::vector<double>(n, uniform(rng, -50, 150)));
    }
    case GeneratorSpec::Shape::increasing: {
      int n = require_records(spec, 1);
      return from_values(strictly_monotone(rng, n, uniform(rng, -20, 20), true));
    }
    case GeneratorSpec::Shape::decreasing: {
      int n = require_records(spec, 1);
      return from_values(strictly_monotone(rng, n, uniform(rng, 100, 200), false));
    }
    case GeneratorSpec::Shape::single_extremum: {
      int n = require_records(spec, 3);
      int peak = n / 2;
      std::vector<double> v = strictly_monotone(rng, peak + 1, uniform(rng, 0, 10), true);
      while (static_cast<int>(v.size()) < n)
        v.push_back(v.back() - uniform(rng, 0.5, 8.0));
      return from_values(v);
    }
    case GeneratorSpec::Shape::two_extrema: {
      int n = require_records(spec, 4);
      int peak = std::max(1, n / 3);
      int valley = std::max(peak + 1, 2 * n / 3);
      std::vector<double> v;
      v.push_back(uniform(rng, 0, 10));
      while (static_cast<int>(v.size()) <= peak)
        v.push_back(v.back() + uniform(rng, 1, 5));
      while (static_cast<int>(v.size()) <= valley)
        v.push_back(v.back() - uniform(rng, 1, 5));
      while (static_cast<int>(v.size()) < n)
        v.push_back(v.back() + uniform(rng, 1, 5));
      return from_values(v);
    }
    case GeneratorSpec::Shape::spiky: {
      int per_spike = 2;
      int n = require_records(spec, 1 + per_spike * std::max(1, spec.n_spikes));
      std::vector<double> values;
      std::vector<double> times;
      double base = uniform(rng, 0, 5);
      double t = 0;
      values.push_back(base);
      times.push_back(t);
      for (int k = 0; k < spec.n_spikes; ++k) {
        double amp = uniform(rng, spec.amp_range.first, spec.amp_range.second);
        double width =
            uniform(rng, spec.width_range.first, spec.width_range.second);
        t += width / 2;
        values.push_back(base + amp);
        times.push_back(t);
        t += width / 2;
        values.push_back(base);
        times.push_back(t);
      }
      while (static_cast<int>(values.size()) < spec.n_records) {
        t += 1.0;
        values.push_back(base);
        times.push_back(t);
      }
      std::vector<Record> records;
      for (size_t i = 0; i < values.size(); ++i) {
        Record r;
        r.timestamp = times[i];
        r.values["s"] = values[i];
        records.push_back(std::move(r));
      }
      return Trace(std::move(records), {"s"});
    }
    case GeneratorSpec::Shape::oscillating: {
      int n = require_records(spec, 2 * std::max(1, spec.n_spikes) + 3);
      double p2p = uniform(rng, spec.p2p_range.first, spec.p2p_range.second);
      double period =
          uniform(rng, spec.period_range.first, spec.period_range.second);
      std::vector<Record> records;
      double base = uniform(rng, 50, 100);
      for (int i = 0; i < n; ++i) {
        Record r;
        r.timestamp = i * period / 2;
        r.values["s"] = (i % 2 == 0) ? base + p2p / 2 : base - p2p / 2;
        records.push_back(std::move(r));
      }
      return Trace(std::move(records), {"s"});
    }
    case GeneratorSpec::Shape::cause_seeded:
      throw std::invalid_argument("cause_seeded handled separately");
  }
  throw std::invalid_argument("unknown shape");
}

// --- cause-seeded recipes --------------------------------------------------

std::vector<double> low_values(std::mt19937_64& rng, int n, double lo, double hi) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(uniform(rng, lo, hi));
  return v;
}

Trace bounded_mu_trace(std::mt19937_64& rng, int n) {
  if (n < 6) throw std::invalid_argument("assert cause trace needs >= 6 records");
  std::vector<double> gaps(n - 1);
  double total = 0;
  for (auto& g : gaps) {
    g = uniform(rng, 0.9, 1.1);
    total += g;
  }
  std::vector<double> ts(n);
  ts[0] = 0;
  for (int i = 1; i < n; ++i) ts[i] = ts[i - 1] + gaps[i - 1] * (50.0 / total);
  ts[n - 1] = 50.0;

  // First violating record pinned at exactly t=45.85.
  int v = 1;
  for (int i = 1; i + 1 < n; ++i)
    if (std::fabs(ts[i] - 45.85) < std::fabs(ts[v] - 45.85)) v = i;
  ts[v] = 45.85;

  std::vector<double> mu(n);
  for (int i = 0; i < n; ++i) {
    double base = 0.003 + 0.002 * std::sin(ts[i] / 3.0);
    mu[i] = base + uniform(rng, -0.0004, 0.0004);
  }
  mu[v] = 0.0070278;
  int excursion_end = std::min(n - 1, v + 99);
  for (int i = v + 1; i <= excursion_end; ++i)
    mu[i] = uniform(rng, 0.00701, 0.00754);

  std::vector<Record> records;
  for (int i = 0; i < n; ++i) {
    Record r;
    r.timestamp = ts[i];
    r.values["mu"] = mu[i];
    records.push_back(std::move(r));
  }
  return Trace(std::move(records), {"mu"});
}

Trace generate_cause_trace(const ViolationCauseId& id, const GeneratorSpec& spec,
                           std::mt19937_64& rng) {
  const int n = std::max(spec.n_records, 8);
  switch (id.family) {
    case CauseFamily::negation: {
      // becomes < 3 must hold: high prefix, then a clean crossing.
      int k = std::max(1, n / 2);
      std::vector<double> v;
      for (int i = 0; i < k; ++i) v.push_back(uniform(rng, 3.5, 8.0));
      for (int i = k; i < n; ++i) v.push_back(uniform(rng, 0.0, 2.5));
      return from_values(v);
    }
    case CauseFamily::a_at:
    case CauseFamily::a_bef:
    case CauseFamily::a_aft:
    case CauseFamily::a_bet:
      return from_values(low_values(rng, n, 0, 10));
    case CauseFamily::e_bef: {
      int mid = 1 + static_cast<int>(rng() % std::max(1, n - 3));
      std::vector<double> u(n), s(n);
      for (int i = 0; i < n; ++i) {
        u[i] = (i == mid || i == mid + 1) ? uniform(rng, 6, 20) : uniform(rng, 0, 4);
        s[i] = uniform(rng, 0, 4);
      }
      return from_columns({{"s", s}, {"u", u}});
    }
    case CauseFamily::e_aft: {
      std::vector<double> u(n), s(n);
      for (int i = 0; i < n; ++i) {
        u[i] = (i <= 1) ? uniform(rng, 6, 20) : uniform(rng, 0, 4);
        s[i] = uniform(rng, 0, 4);
      }
      return from_columns({{"s", s}, {"u", u}});
    }
    case CauseFamily::e_bet: {
      std::vector<double> u(n), w(n), s(n);
      for (int i = 0; i < n; ++i) {
        u[i] = (i <= 1) ? uniform(rng, 6, 20) : uniform(rng, 0, 4);
        w[i] = (i >= n - 2) ? uniform(rng, 6, 20) : uniform(rng, 0, 4);
        s[i] = uniform(rng, 0, 4);
      }
      return from_columns({{"s", s}, {"u", u}, {"w", w}});
    }
    case CauseFamily::assertion: return bounded_mu_trace(rng, n);
    case CauseFamily::becomes: {
      if (id.index == 1) return from_values(low_values(rng, n, 0, 99));
      if (id.index == 2) return from_values(low_values(rng, n, 101, 200));
      int k = 1 + static_cast<int>(rng() % std::max(1, n - 2));
      std::vector<double> v(n);
      for (int i = 0; i < k; ++i) v[i] = uniform(rng, 101, 200);
      v[k] = uniform(rng, 101, 150);
      for (int i = k + 1; i < n; ++i) v[i] = uniform(rng, 0, 99);
      return from_values(v);
    }
    case CauseFamily::spike: {
      switch (id.index) {
        case 1:
        case 2: {
          int peak = n / 2;
          std::vector<double> v(n);
          double top = uniform(rng, 70, 160);
          for (int i = 0; i <= peak; ++i)
            v[i] = top * static_cast<double>(i) / peak;
          for (int i = peak + 1; i < n; ++i)
            v[i] = std::max(0.0, v[i - 1] - uniform(rng, 5, 25));
          // keep the tail strictly decreasing
          for (int i = peak + 1; i < n; ++i)
            if (v[i] >= v[i - 1]) v[i] = v[i - 1] - 1.0;
          return from_values(v);
        }
        case 3: return from_values(std::vector<double>(n, uniform(rng, 0, 100)));
        case 4:
          return from_values(strictly_monotone(rng, n, uniform(rng, 150, 250), false));
        case 5:
          return from_values(strictly_monotone(rng, n, uniform(rng, 0, 50), true));
      }
      break;
    }
    case CauseFamily::oscillation: {
      switch (id.index) {
        case 1:
        case 2: {
          std::vector<double> v(n);
          for (int i = 0; i < n; ++i)
            v[i] = (i % 2 == 0) ? uniform(rng, 120, 200) : uniform(rng, 0, 40);
          return from_values(v);
        }
        case 3: {
          int peak = std::max(1, n / 2);
          std::vector<double> v(n);
          v[0] = uniform(rng, 0, 5);
          for (int i = 1; i <= peak; ++i) v[i] = v[i - 1] + uniform(rng, 2, 6);
          for (int i = peak + 1; i < n; ++i) v[i] = v[i - 1] - uniform(rng, 1, 4);
          return from_values(v);
        }
        case 4: {
          int peak = std::max(1, n / 3);
          int valley = std::max(peak + 1, 2 * n / 3);
          std::vector<double> v(n);
          v[0] = uniform(rng, 0, 5);
          for (int i = 1; i <= peak; ++i) v[i] = v[i - 1] + uniform(rng, 2, 6);
          for (int i = peak + 1; i <= valley; ++i)
            v[i] = v[i - 1] - uniform(rng, 2, 6);
          for (int i = valley + 1; i < n; ++i)
            v[i] = v[i - 1] + uniform(rng, 2, 6);
          return from_values(v);
        }
        case 5: return from_values(std::vector<double>(n, uniform(rng, 0, 200)));
        case 6:
          return from_values(strictly_monotone(rng, n, uniform(rng, 150, 250), false));
        case 7:
          return from_values(strictly_monotone(rng, n, uniform(rng, 0, 50), true));
      }
      break;
    }
    case CauseFamily::rises: {
      switch (id.index) {
        case 1: return from_values(low_values(rng, n, 0, 99));
        case 2: return from_values(low_values(rng, n, 100, 200));
        case 3: {
          std::vector<double> v(n);
          v[0] = uniform(rng, 5, 20);
          v[1] = v[0] + uniform(rng, 10, 30);
          v[2] = v[1] - uniform(rng, 5, 9);  // breaks monotonicity
          int k = std::max(3, n / 2);
          for (int i = 3; i < k; ++i) v[i] = std::min(95.0, v[i - 1] + uniform(rng, 1, 5));
          v[k] = uniform(rng, 100, 150);
          for (int i = k + 1; i < n; ++i) v[i] = v[i - 1] + uniform(rng, 0.5, 3);
          return from_values(v);
        }
        case 4: {
          int k = 1 + static_cast<int>(rng() % std::max(1, n - 2));
          std::vector<double> v(n);
          for (int i = 0; i < k; ++i) v[i] = uniform(rng, 100, 180);
          for (int i = k; i < n; ++i) v[i] = uniform(rng, 0, 99);
          return from_values(v);
        }
      }
      break;
    }
    case CauseFamily::overshoots: {
      switch (id.index) {
        case 1: return from_values(low_values(rng, n, 0, 99));
        case 2: {
          int k = 1 + static_cast<int>(rng() % std::max(1, n - 2));
          std::vector<double> v(n);
          for (int i = 0; i < k; ++i) v[i] = uniform(rng, 0, 99);
          for (int i = k; i < n; ++i) v[i] = uniform(rng, 121, 200);
          return from_values(v);
        }
        case 3: {
          std::vector<double> v(n);
          v[0] = uniform(rng, 5, 20);
          v[1] = v[0] + uniform(rng, 10, 30);
          v[2] = v[1] - uniform(rng, 5, 9);
          int k = std::max(3, n / 2);
          for (int i = 3; i < k; ++i)
            v[i] = std::min(95.0, v[i - 1] + uniform(rng, 1, 5));
          v[k] = uniform(rng, 101, 119);
          for (int i = k + 1; i < n; ++i) v[i] = uniform(rng, 90, 119);
          return from_values(v);
        }
        case 4: {
          int k = 1 + static_cast<int>(rng() % std::max(1, n - 3));
          std::vector<double> v(n);
          for (int i = 0; i <= k; ++i) v[i] = uniform(rng, 100, 120);
          for (int i = k + 1; i < n; ++i) v[i] = uniform(rng, 0, 99);
          return from_values(v);
        }
      }
      break;
    }
    case CauseFamily::if_then: {
      std::vector<double> u(n), s(n);
      for (int i = 0; i < n; ++i) {
        u[i] = (i == 1 || i == 2) ? uniform(rng, 6, 20) : uniform(rng, 0, 4);
        s[i] = uniform(rng, 0, 4);
      }
      if (id.index == 2)
        for (int i = n - 2; i < n; ++i) s[i] = uniform(rng, 6, 20);
      return from_columns({{"s", s}, {"u", u}});
    }
  }
  throw std::invalid_argument("no recipe for cause " + to_string(id));
}

}  // namespace

std::string cause_property_text(const ViolationCauseId& id) {
  switch (id.family) {
    case CauseFamily::negation: return "not globally s becomes < 3";
    case CauseFamily::a_at: return "at 999 assert s < 1000000";
    case CauseFamily::a_bef: return "before 999 assert s < 1000000";
    case CauseFamily::a_aft: return "after 999 assert s < 1000000";
    case CauseFamily::a_bet: return "between 6 and 3 assert s < 1000000";
    case CauseFamily::e_bef: return "before assert u > 5 assert s > 5";
    case CauseFamily::e_aft: return "after assert u > 5 assert s > 5";
    case CauseFamily::e_bet:
      return "between assert u > 5 and assert w > 5 assert s > 5";
    case CauseFamily::assertion: return "between 11 and 50 assert mu < 0.007";
    case CauseFamily::becomes: return "globally s becomes > 100";
    case CauseFamily::spike:
      if (id.index == 1) return "globally exists spike in s with amplitude < 50";
      if (id.index == 2) return "globally exists spike in s with width < 0.2";
      return "globally exists spike in s with width < 0.5 amplitude < 90";
    case CauseFamily::oscillation:
      if (id.index == 1)
        return "globally exist oscillation in s with p2pAmp < 50";
      if (id.index == 2)
        return "globally exist oscillation in s with period < 0.3";
      return "globally exist oscillation in s with p2pAmp < 50 period < 0.3";
    case CauseFamily::rises:
      return "globally s rises monotonically reaching 100";
    case CauseFamily::overshoots:
      return "globally s overshoots monotonically 100 by 20";
    case CauseFamily::if_then:
      if (id.index == 1) return "globally if assert u > 5 then assert s > 5";
      return "globally if assert u > 5 then within at most 1 assert s > 5";
  }
  return "";
}

std::optional<GeneratorSpec::Shape> shape_from_name(const std::string& name) {
  if (name == "constant") return GeneratorSpec::Shape::constant;
  if (name == "increasing") return GeneratorSpec::Shape::increasing;
  if (name == "decreasing") return GeneratorSpec::Shape::decreasing;
  if (name == "single-extremum") return GeneratorSpec::Shape::single_extremum;
  if (name == "two-extrema") return GeneratorSpec::Shape::two_extrema;
  if (name == "spiky") return GeneratorSpec::Shape::spiky;
  if (name == "oscillating") return GeneratorSpec::Shape::oscillating;
  if (name == "cause-seeded") return GeneratorSpec::Shape::cause_seeded;
  return std::nullopt;
}

Trace generate_trace(const GeneratorSpec& spec) {
  if (spec.n_records < 1)
    throw std::invalid_argument("n_records must be at least 1");
  if (spec.shape != GeneratorSpec::Shape::cause_seeded) {
    std::mt19937_64 rng(spec.seed);
    return generate_shape(spec, rng);
  }
  if (!spec.cause) throw std::invalid_argument("cause_seeded needs a cause id");

  // Constructive recipes with a bounded retry budget; each retry reseeds.
  Property property = parse_property(cause_property_text(*spec.cause));
  for (uint64_t attempt = 0; attempt < 32; ++attempt) {
    std::mt19937_64 rng(spec.seed * 1000003 + attempt);
    Trace trace = generate_cause_trace(*spec.cause, spec, rng);
    Trace prepared = prepare(trace, used_variables(property));
    Atom atom = atoms_of(property).front();
    for (const auto& binding : causes_for(prepared, atom)) {
      if (binding.id == *spec.cause && check_cause(prepared, binding))
        return trace;
    }
  }
  throw std::runtime_error("failed to satisfy cause " + to_string(*spec.cause) +
                           " within the retry budget");
}

Trace random_trace(std::mt19937_64& rng, int max_records) {
  int n = 5 + static_cast<int>(rng() % std::max(1, max_records - 4));
  bool two_vars = rng() % 3 == 0;
  bool coarse = rng() % 2 == 0;
  std::vector<Record> records;
  for (int i = 0; i < n; ++i) {
    Record r;
    r.timestamp = i * 0.5;
    r.values["s"] = coarse ? static_cast<double>(rng() % 6)
                           : uniform(rng, 0, 5);
    if (two_vars)
      r.values["u"] = coarse ? static_cast<double>(rng() % 6)
                             : uniform(rng, 0, 5);
    records.push_back(std::move(r));
  }
  std::vector<std::string> vars{"s"};
  if (two_vars) vars.push_back("u");
  return Trace(std::move(records), std::move(vars));
}

namespace {

PatternPtr random_simple_pattern(std::mt19937_64& rng, const Trace& trace) {
  auto p = std::make_shared<Pattern>();
  std::string var = trace.has_variable("u") && rng() % 2 ? "u" : "s";
  double v = static_cast<double>(rng() % 6);
  switch (rng() % 3) {
    case 0: {
      p->kind = Pattern::Kind::assertion;
      CmpOp ops[] = {CmpOp::lt, CmpOp::gt, CmpOp::eq,
                     CmpOp::neq, CmpOp::le, CmpOp::ge};
      p->condition = Condition::cmp(SignalExpr::variable(var),
                                    ops[rng() % 6], v);
      break;
    }
    case 1:
      p->kind = Pattern::Kind::becomes;
      p->signal = SignalExpr::variable(var);
      p->op = rng() % 2 ? CmpOp::gt : CmpOp::le;
      p->value = v;
      break;
    default:
      p->kind = rng() % 2 ? Pattern::Kind::rises : Pattern::Kind::falls;
      p->signal = SignalExpr::variable(var);
      p->monotonic = rng() % 2 == 0;
      p->value = v;
      break;
  }
  return p;
}

PatternPtr random_pattern(std::mt19937_64& rng, const Trace& trace) {
  auto p = std::make_shared<Pattern>();
  std::string var = trace.has_variable("u") && rng() % 2 ? "u" : "s";
  double v = static_cast<double>(rng() % 6);
  switch (rng() % 8) {
    case 0:
    case 1:
      return random_simple_pattern(rng, trace);
    case 2: {
      p->kind = Pattern::Kind::spike;
      p->signal = SignalExpr::variable(var);
      if (rng() % 2) p->width = ValueConstraint{CmpOp::lt, 1.0 + (rng() % 3)};
      if (rng() % 2) p->amplitude = ValueConstraint{CmpOp::lt, v};
      return p;
    }
    case 3: {
      p->kind = Pattern::Kind::oscillation;
      p->signal = SignalExpr::variable(var);
      if (rng() % 2) p->p2p_amp = ValueConstraint{CmpOp::lt, v};
      if (rng() % 2) p->period = ValueConstraint{CmpOp::le, 1.0 + (rng() % 3)};
      return p;
    }
    case 4: {
      p->kind = rng() % 2 ? Pattern::Kind::overshoots
                          : Pattern::Kind::undershoots;
      p->signal = SignalExpr::variable(var);
      p->monotonic = rng() % 2 == 0;
      p->target = v;
      p->margin = static_cast<double>(rng() % 3);
      return p;
    }
    case 5: {
      p->kind = Pattern::Kind::if_then;
      p->trigger = random_simple_pattern(rng, trace);
      p->response = random_simple_pattern(rng, trace);
      if (rng() % 2) {
        WithinBound bounds[] = {WithinBound::exactly, WithinBound::at_most,
                                WithinBound::at_least};
        p->within = bounds[rng() % 3];
        p->within_bound = 0.5 * (1 + rng() % 5);
      }
      return p;
    }
    default:
      return random_simple_pattern(rng, trace);
  }
}

}  // namespace

Atom random_atom(std::mt19937_64& rng, const Trace& trace) {
  Atom atom;
  atom.negated = rng() % 4 == 0;
  Scope sc;
  double ti = trace.t_initial();
  double te = trace.t_end();
  auto boundary = [&] {
    // Sometimes on a sample, sometimes between samples, sometimes outside.
    switch (rng() % 4) {
      case 0: return ti + 0.5 * static_cast<double>(rng() % trace.size());
      case 1: return ti + 0.25 + 0.5 * static_cast<double>(rng() % trace.size());
      case 2: return te + 1.0;
      default: return ti - 1.0;
    }
  };
  switch (rng() % 10) {
    case 0:
    case 1:
    case 2:
      sc.kind = Scope::Kind::globally;
      break;
    case 3:
      sc.kind = Scope::Kind::before_t;
      sc.t1 = boundary();
      break;
    case 4:
      sc.kind = Scope::Kind::after_t;
      sc.t1 = boundary();
      break;
    case 5:
      sc.kind = Scope::Kind::at_t;
      sc.t1 = boundary();
      break;
    case 6:
      sc.kind = Scope::Kind::between_t;
      sc.t1 = boundary();
      sc.t2 = sc.t1 + 0.5 * static_cast<double>(1 + rng() % 6);
      break;
    case 7:
      sc.kind = Scope::Kind::before_p;
      sc.opener = random_simple_pattern(rng, trace);
      break;
    case 8:
      sc.kind = Scope::Kind::after_p;
      sc.opener = random_simple_pattern(rng, trace);
      break;
    default:
      sc.kind = Scope::Kind::between_p;
      sc.opener = random_simple_pattern(rng, trace);
      sc.closer = random_simple_pattern(rng, trace);
      break;
  }
  sc.body = sc.kind == Scope::Kind::before_p || sc.kind == Scope::Kind::after_p ||
                    sc.kind == Scope::Kind::between_p
                ? random_simple_pattern(rng, trace)
                : random_pattern(rng, trace);
  atom.scope = std::move(sc);
  return atom;
}

}  // namespace sigdiag
