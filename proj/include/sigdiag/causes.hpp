#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sigdiag/checker.hpp"

namespace sigdiag {

enum class CauseFamily {
  negation,
  a_at,
  a_bef,
  a_aft,
  a_bet,
  e_bef,
  e_aft,
  e_bet,
  assertion,
  becomes,
  spike,
  oscillation,
  rises,
  overshoots,
  if_then,
};

struct ViolationCauseId {
  CauseFamily family = CauseFamily::negation;
  int index = 1;

  friend bool operator==(const ViolationCauseId&, const ViolationCauseId&) = default;
};

/// Serialized as c_<family>_<index>, e.g. c_a_bet_1, c_spike_4, c_if_then_2.
std::string to_string(const ViolationCauseId& id);
std::optional<ViolationCauseId> cause_from_string(const std::string& name);

/// All 34 catalog entries, scope families first, ascending index per family.
const std::vector<ViolationCauseId>& cause_catalog();

/// One cause instantiated with an atom's parameters. Pattern-family causes
/// evaluate on `interval`; scope-family causes compare boundaries against the
/// trace span. `dual` marks rises/overshoots causes bound to their mirrored
/// patterns (falls/undershoots).
struct CauseBinding {
  ViolationCauseId id;
  Atom atom;
  EvaluationInterval interval;
  bool dual = false;
  ShapePolarity polarity = ShapePolarity::as_written;
};

/// Ordered cause list for an atom: negated atoms get only the negation cause;
/// otherwise scope causes precede pattern causes, ascending index within the
/// family. Spike/oscillation constraint causes are emitted only when the
/// pattern carries the corresponding constraint; monotonicity causes only for
/// monotonic patterns.
std::vector<CauseBinding> causes_for(const Trace& trace, const Atom& atom);

bool check_cause(const Trace& trace, const CauseBinding& binding,
                 const EvalOptions& opts = {});

}  // namespace sigdiag
