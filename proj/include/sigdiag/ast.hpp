#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sigdiag {

// Comparison operators usable in conditions, becomes constraints and
// spike/oscillation constraints.
enum class CmpOp { lt, gt, eq, neq, le, ge };

const char* to_symbol(CmpOp op);

struct SignalExpr;
using SignalExprPtr = std::shared_ptr<const SignalExpr>;

/// Arithmetic expression over signal variables, evaluated per record.
struct SignalExpr {
  enum class Kind { variable, constant, binary };

  Kind kind = Kind::constant;
  std::string name;   // variable
  double value = 0;   // constant
  char op = 0;        // binary: one of + - * /
  SignalExprPtr lhs, rhs;

  static SignalExprPtr variable(std::string n);
  static SignalExprPtr constant(double v);
  static SignalExprPtr binary(char op, SignalExprPtr l, SignalExprPtr r);
};

struct Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

struct Condition {
  enum class Kind { cmp, conj, disj };

  Kind kind = Kind::cmp;
  SignalExprPtr signal;  // cmp
  CmpOp op = CmpOp::lt;
  double value = 0;
  ConditionPtr lhs, rhs;  // conj/disj

  static ConditionPtr cmp(SignalExprPtr s, CmpOp op, double v);
  static ConditionPtr conj(ConditionPtr l, ConditionPtr r);
  static ConditionPtr disj(ConditionPtr l, ConditionPtr r);
};

/// Optional "op value" constraint attached to spike/oscillation patterns.
struct ValueConstraint {
  CmpOp op = CmpOp::lt;
  double value = 0;
};

enum class WithinBound { exactly, at_most, at_least };

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Pattern {
  enum class Kind {
    assertion,
    becomes,
    if_then,
    spike,
    oscillation,
    rises,
    falls,
    overshoots,
    undershoots,
  };

  Kind kind = Kind::assertion;

  ConditionPtr condition;  // assertion

  SignalExprPtr signal;  // all value-shaped patterns
  CmpOp op = CmpOp::lt;  // becomes
  double value = 0;      // becomes constraint / rises & falls target

  bool monotonic = false;  // rises/falls/overshoots/undershoots
  double target = 0;       // overshoots/undershoots v1
  double margin = 0;       // overshoots/undershoots v2

  std::optional<ValueConstraint> width, amplitude;  // spike
  std::optional<ValueConstraint> p2p_amp, period;   // oscillation

  PatternPtr trigger, response;  // if_then
  std::optional<WithinBound> within;
  double within_bound = 0;
};

struct Scope {
  enum class Kind {
    globally,
    before_t,
    after_t,
    at_t,
    between_t,
    before_p,
    after_p,
    between_p,
  };

  Kind kind = Kind::globally;
  double t1 = 0, t2 = 0;      // absolute boundaries
  PatternPtr opener, closer;  // event boundaries
  PatternPtr body;
};

struct Atom {
  bool negated = false;
  Scope scope;
};

struct Clause {
  std::vector<Atom> atoms;  // conjunction
};

struct Property {
  std::vector<Clause> clauses;  // disjunction
};

/// All atoms across all clauses, in source order.
std::vector<Atom> atoms_of(const Property& property);

std::set<std::string> used_variables(const Property& property);
std::set<std::string> used_variables(const Pattern& pattern);
void collect_variables(const SignalExpr& expr, std::set<std::string>& out);

// Canonical concrete syntax. parse(to_string(x)) reproduces x.
std::string to_string(const SignalExpr& expr);
std::string to_string(const Condition& cond);
std::string to_string(const Pattern& pattern);
std::string to_string(const Scope& scope);
std::string to_string(const Atom& atom);
std::string to_string(const Property& property);

bool equal(const SignalExpr& a, const SignalExpr& b);
bool equal(const Condition& a, const Condition& b);
bool equal(const Pattern& a, const Pattern& b);
bool equal(const Scope& a, const Scope& b);
bool equal(const Atom& a, const Atom& b);
bool equal(const Property& a, const Property& b);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace sigdiag
