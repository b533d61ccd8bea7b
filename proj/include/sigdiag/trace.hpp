#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigdiag/ast.hpp"

namespace sigdiag {

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One sampled row: a timestamp plus the values recorded at that instant.
/// A variable absent from `values` carried no sample in that row.
struct Record {
  double timestamp = 0;
  std::map<std::string, double> values;
};

/// Immutable ordered sequence of records. Timestamps strictly increase and
/// the sequence is never empty.
class Trace {
 public:
  Trace(std::vector<Record> records, std::vector<std::string> variables);

  const std::vector<Record>& records() const { return records_; }
  const std::vector<std::string>& variables() const { return variables_; }
  bool has_variable(const std::string& name) const;

  size_t size() const { return records_.size(); }
  double t_initial() const { return records_.front().timestamp; }
  double t_end() const { return records_.back().timestamp; }
  double recording_interval() const { return t_end() - t_initial(); }

  double timestamp(size_t index) const { return records_[index].timestamp; }
  bool has_value(size_t index, const std::string& var) const;
  double value(size_t index, const std::string& var) const;

  /// Index of the record sampled exactly at t, if any.
  std::optional<size_t> index_of(double t) const;
  /// First index with timestamp >= t (== size() when none).
  size_t lower_bound(double t) const;
  /// One past the last index with timestamp <= t (== 0 when none).
  size_t upper_bound(double t) const;

 private:
  std::vector<Record> records_;
  std::vector<std::string> variables_;
};

/// Window a scope hands to a pattern; both bounds in seconds.
struct EvaluationInterval {
  double lower = 0;
  double upper = 0;
};

enum class InterpolationPolicy { linear, previous_value, nearest };

std::optional<InterpolationPolicy> interpolation_from_name(const std::string& s);
const char* to_name(InterpolationPolicy policy);

/// CSV ingestion. First column must be named "timestamp"; remaining columns
/// are variables. Empty cells are missing samples.
Trace parse_csv(const std::string& text);
Trace load_csv_file(const std::string& path);

/// Inverse of parse_csv for prepared traces; values printed in shortest
/// round-trip form.
std::string serialize_csv(const Trace& trace);

/// Projects the trace onto `used_vars` and fills remaining gaps:
///  - records with no value for any used variable are dropped,
///  - values of other variables are dropped,
///  - missing used values are interpolated with the per-variable policy
///    (falling back to `policy`).
Trace prepare(const Trace& trace, const std::set<std::string>& used_vars,
              InterpolationPolicy policy = InterpolationPolicy::linear,
              const std::map<std::string, InterpolationPolicy>& per_var = {});

/// Value of a variable at a sample timestamp of a prepared trace.
double signal_value(const Trace& trace, const std::string& var, double t);
/// Value of an arithmetic expression over variables at a sample timestamp.
double signal_value(const Trace& trace, const SignalExpr& expr, double t);
double signal_value_at(const Trace& trace, const SignalExpr& expr, size_t index);

}  // namespace sigdiag
