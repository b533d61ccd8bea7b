#include "sigdiag/ast.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sigdiag {

const char* to_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::gt: return ">";
    case CmpOp::eq: return "=";
    case CmpOp::neq: return "<>";
    case CmpOp::le: return "<=";
    case CmpOp::ge: return ">=";
  }
  return "?";
}

SignalExprPtr SignalExpr::variable(std::string n) {
  auto e = std::make_shared<SignalExpr>();
  e->kind = Kind::variable;
  e->name = std::move(n);
  return e;
}

SignalExprPtr SignalExpr::constant(double v) {
  auto e = std::make_shared<SignalExpr>();
  e->kind = Kind::constant;
  e->value = v;
  return e;
}

SignalExprPtr SignalExpr::binary(char op, SignalExprPtr l, SignalExprPtr r) {
  auto e = std::make_shared<SignalExpr>();
  e->kind = Kind::binary;
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ConditionPtr Condition::cmp(SignalExprPtr s, CmpOp op, double v) {
  auto c = std::make_shared<Condition>();
  c->kind = Kind::cmp;
  c->signal = std::move(s);
  c->op = op;
  c->value = v;
  return c;
}

ConditionPtr Condition::conj(ConditionPtr l, ConditionPtr r) {
  auto c = std::make_shared<Condition>();
  c->kind = Kind::conj;
  c->lhs = std::move(l);
  c->rhs = std::move(r);
  return c;
}

ConditionPtr Condition::disj(ConditionPtr l, ConditionPtr r) {
  auto c = std::make_shared<Condition>();
  c->kind = Kind::disj;
  c->lhs = std::move(l);
  c->rhs = std::move(r);
  return c;
}

std::vector<Atom> atoms_of(const Property& property) {
  std::vector<Atom> out;
  for (const auto& clause : property.clauses)
    for (const auto& atom : clause.atoms) out.push_back(atom);
  return out;
}

void collect_variables(const SignalExpr& expr, std::set<std::string>& out) {
  switch (expr.kind) {
    case SignalExpr::Kind::variable: out.insert(expr.name); break;
    case SignalExpr::Kind::constant: break;
    case SignalExpr::Kind::binary:
      collect_variables(*expr.lhs, out);
      collect_variables(*expr.rhs, out);
      break;
  }
}

namespace {

void collect(const Condition& c, std::set<std::string>& out) {
  if (c.kind == Condition::Kind::cmp) {
    collect_variables(*c.signal, out);
  } else {
    collect(*c.lhs, out);
    collect(*c.rhs, out);
  }
}

void collect(const Pattern& p, std::set<std::string>& out) {
  switch (p.kind) {
    case Pattern::Kind::assertion: collect(*p.condition, out); break;
    case Pattern::Kind::if_then:
      collect(*p.trigger, out);
      collect(*p.response, out);
      break;
    default: collect_variables(*p.signal, out); break;
  }
}

void collect(const Scope& sc, std::set<std::string>& out) {
  if (sc.opener) collect(*sc.opener, out);
  if (sc.closer) collect(*sc.closer, out);
  collect(*sc.body, out);
}

}  // namespace

std::set<std::string> used_variables(const Property& property) {
  std::set<std::string> out;
  for (const auto& clause : property.clauses)
    for (const auto& atom : clause.atoms) collect(atom.scope, out);
  return out;
}

std::set<std::string> used_variables(const Pattern& pattern) {
  std::set<std::string> out;
  collect(pattern, out);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

int precedence(char op) { return (op == '*' || op == '/') ? 2 : 1; }

void print_expr(const SignalExpr& e, std::ostringstream& os, int parent_prec,
                bool rhs_of_nonassoc) {
  switch (e.kind) {
    case SignalExpr::Kind::variable: os << e.name; return;
    case SignalExpr::Kind::constant: os << format_double(e.value); return;
    case SignalExpr::Kind::binary: {
      int prec = precedence(e.op);
      bool parens = prec < parent_prec || (prec == parent_prec && rhs_of_nonassoc);
      if (parens) os << "(";
      print_expr(*e.lhs, os, prec, false);
      os << " " << e.op << " ";
      print_expr(*e.rhs, os, prec, e.op == '-' || e.op == '/');
      if (parens) os << ")";
      return;
    }
  }
}

void print_cond(const Condition& c, std::ostringstream& os, bool inside_disj) {
  switch (c.kind) {
    case Condition::Kind::cmp:
      os << to_string(*c.signal) << " " << to_symbol(c.op) << " "
         << format_double(c.value);
      return;
    case Condition::Kind::conj:
      print_cond(*c.lhs, os, false);
      os << " and ";
      print_cond(*c.rhs, os, false);
      return;
    case Condition::Kind::disj:
      if (inside_disj) os << "(";
      print_cond(*c.lhs, os, true);
      os << " or ";
      print_cond(*c.rhs, os, true);
      if (inside_disj) os << ")";
      return;
  }
}

void print_constraint(std::ostringstream& os, const char* name,
                      const ValueConstraint& c) {
  os << " " << name << " " << to_symbol(c.op) << " " << format_double(c.value);
}

}  // namespace

std::string to_string(const SignalExpr& expr) {
  std::ostringstream os;
  print_expr(expr, os, 0, false);
  return os.str();
}

std::string to_string(const Condition& cond) {
  std::ostringstream os;
  print_cond(cond, os, false);
  return os.str();
}

std::string to_string(const Pattern& p) {
  std::ostringstream os;
  switch (p.kind) {
    case Pattern::Kind::assertion:
      os << "assert " << to_string(*p.condition);
      break;
    case Pattern::Kind::becomes:
      os << to_string(*p.signal) << " becomes " << to_symbol(p.op) << " "
         << format_double(p.value);
      break;
    case Pattern::Kind::if_then:
      os << "if " << to_string(*p.trigger) << " then ";
      if (p.within) {
        os << "within ";
        switch (*p.within) {
          case WithinBound::exactly: os << "exactly"; break;
          case WithinBound::at_most: os << "at most"; break;
          case WithinBound::at_least: os << "at least"; break;
        }
        os << " " << format_double(p.within_bound) << " ";
      }
      os << to_string(*p.response);
      break;
    case Pattern::Kind::spike:
      os << "exists spike in " << to_string(*p.signal);
      if (p.width || p.amplitude) {
        os << " with";
        if (p.width) print_constraint(os, "width", *p.width);
        if (p.amplitude) print_constraint(os, "amplitude", *p.amplitude);
      }
      break;
    case Pattern::Kind::oscillation:
      os << "exist oscillation in " << to_string(*p.signal);
      if (p.p2p_amp || p.period) {
        os << " with";
        if (p.p2p_amp) print_constraint(os, "p2pAmp", *p.p2p_amp);
        if (p.period) print_constraint(os, "period", *p.period);
      }
      break;
    case Pattern::Kind::rises:
    case Pattern::Kind::falls:
      os << to_string(*p.signal)
         << (p.kind == Pattern::Kind::rises ? " rises" : " falls");
      if (p.monotonic) os << " monotonically";
      os << " reaching " << format_double(p.value);
      break;
    case Pattern::Kind::overshoots:
    case Pattern::Kind::undershoots:
      os << to_string(*p.signal)
         << (p.kind == Pattern::Kind::overshoots ? " overshoots" : " undershoots");
      if (p.monotonic) os << " monotonically";
      os << " " << format_double(p.target) << " by " << format_double(p.margin);
      break;
  }
  return os.str();
}

std::string to_string(const Scope& sc) {
  std::ostringstream os;
  switch (sc.kind) {
    case Scope::Kind::globally:
      os << "globally " << to_string(*sc.body);
      break;
    case Scope::Kind::before_t:
      os << "before " << format_double(sc.t1) << " " << to_string(*sc.body);
      break;
    case Scope::Kind::after_t:
      os << "after " << format_double(sc.t1) << " " << to_string(*sc.body);
      break;
    case Scope::Kind::at_t:
      os << "at " << format_double(sc.t1) << " " << to_string(*sc.body);
      break;
    case Scope::Kind::between_t:
      os << "between " << format_double(sc.t1) << " and " << format_double(sc.t2)
         << " " << to_string(*sc.body);
      break;
    case Scope::Kind::before_p:
      os << "before " << to_string(*sc.opener) << " " << to_string(*sc.body);
      break;
    case Scope::Kind::after_p:
      os << "after " << to_string(*sc.opener) << " " << to_string(*sc.body);
      break;
    case Scope::Kind::between_p:
      os << "between " << to_string(*sc.opener) << " and "
         << to_string(*sc.closer) << " " << to_string(*sc.body);
      break;
  }
  return os.str();
}

std::string to_string(const Atom& atom) {
  std::string s = to_string(atom.scope);
  return atom.negated ? "not " + s : s;
}

std::string to_string(const Property& property) {
  std::ostringstream os;
  for (size_t i = 0; i < property.clauses.size(); ++i) {
    if (i) os << " or ";
    const auto& clause = property.clauses[i];
    for (size_t j = 0; j < clause.atoms.size(); ++j) {
      if (j) os << " and ";
      os << to_string(clause.atoms[j]);
    }
  }
  return os.str();
}

namespace {
bool eq_opt(const std::optional<ValueConstraint>& a,
            const std::optional<ValueConstraint>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->op == b->op && a->value == b->value;
}
}  // namespace

bool equal(const SignalExpr& a, const SignalExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SignalExpr::Kind::variable: return a.name == b.name;
    case SignalExpr::Kind::constant: return a.value == b.value;
    case SignalExpr::Kind::binary:
      return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool equal(const Condition& a, const Condition& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Condition::Kind::cmp)
    return a.op == b.op && a.value == b.value && equal(*a.signal, *b.signal);
  return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
}

bool equal(const Pattern& a, const Pattern& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Pattern::Kind::assertion: return equal(*a.condition, *b.condition);
    case Pattern::Kind::becomes:
      return a.op == b.op && a.value == b.value && equal(*a.signal, *b.signal);
    case Pattern::Kind::if_then:
      return a.within == b.within &&
             (!a.within || a.within_bound == b.within_bound) &&
             equal(*a.trigger, *b.trigger) && equal(*a.response, *b.response);
    case Pattern::Kind::spike:
      return eq_opt(a.width, b.width) && eq_opt(a.amplitude, b.amplitude) &&
             equal(*a.signal, *b.signal);
    case Pattern::Kind::oscillation:
      return eq_opt(a.p2p_amp, b.p2p_amp) && eq_opt(a.period, b.period) &&
             equal(*a.signal, *b.signal);
    case Pattern::Kind::rises:
    case Pattern::Kind::falls:
      return a.monotonic == b.monotonic && a.value == b.value &&
             equal(*a.signal, *b.signal);
    case Pattern::Kind::overshoots:
    case Pattern::Kind::undershoots:
      return a.monotonic == b.monotonic && a.target == b.target &&
             a.margin == b.margin && equal(*a.signal, *b.signal);
  }
  return false;
}

bool equal(const Scope& a, const Scope& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Scope::Kind::globally: break;
    case Scope::Kind::before_t:
    case Scope::Kind::after_t:
    case Scope::Kind::at_t:
      if (a.t1 != b.t1) return false;
      break;
    case Scope::Kind::between_t:
      if (a.t1 != b.t1 || a.t2 != b.t2) return false;
      break;
    case Scope::Kind::before_p:
    case Scope::Kind::after_p:
      if (!equal(*a.opener, *b.opener)) return false;
      break;
    case Scope::Kind::between_p:
      if (!equal(*a.opener, *b.opener) || !equal(*a.closer, *b.closer))
        return false;
      break;
  }
  return equal(*a.body, *b.body);
}

bool equal(const Atom& a, const Atom& b) {
  return a.negated == b.negated && equal(a.scope, b.scope);
}

bool equal(const Property& a, const Property& b) {
  if (a.clauses.size() != b.clauses.size()) return false;
  for (size_t i = 0; i < a.clauses.size(); ++i) {
    if (a.clauses[i].atoms.size() != b.clauses[i].atoms.size()) return false;
    for (size_t j = 0; j < a.clauses[i].atoms.size(); ++j)
      if (!equal(a.clauses[i].atoms[j], b.clauses[i].atoms[j])) return false;
  }
  return true;
}

}  // namespace sigdiag
