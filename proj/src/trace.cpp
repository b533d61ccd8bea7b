#include "sigdiag/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sigdiag {

Trace::Trace(std::vector<Record> records, std::vector<std::string> variables)
    : records_(std::move(records)), variables_(std::move(variables)) {
  if (records_.empty()) throw TraceError("trace must contain at least one record");
  for (size_t i = 0; i + 1 < records_.size(); ++i) {
    if (records_[i].timestamp == records_[i + 1].timestamp)
      throw TraceError("duplicate timestamp " + format_double(records_[i].timestamp));
    if (records_[i].timestamp > records_[i + 1].timestamp)
      throw TraceError("non-monotone timestamps at " +
                       format_double(records_[i + 1].timestamp));
  }
  for (const auto& r : records_) {
    if (!std::isfinite(r.timestamp))
      throw TraceError("timestamp is not finite");
  }
}

bool Trace::has_variable(const std::string& name) const {
  return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

bool Trace::has_value(size_t index, const std::string& var) const {
  return records_[index].values.count(var) > 0;
}

double Trace::value(size_t index, const std::string& var) const {
  const auto& values = records_[index].values;
  auto it = values.find(var);
  if (it == values.end())
    throw TraceError("no value for variable '" + var + "' at t=" +
                     format_double(records_[index].timestamp));
  return it->second;
}

std::optional<size_t> Trace::index_of(double t) const {
  size_t i = lower_bound(t);
  if (i < records_.size() && records_[i].timestamp == t) return i;
  return std::nullopt;
}

size_t Trace::lower_bound(double t) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), t,
                             [](const Record& r, double v) { return r.timestamp < v; });
  return static_cast<size_t>(it - records_.begin());
}

size_t Trace::upper_bound(double t) const {
  auto it = std::upper_bound(records_.begin(), records_.end(), t,
                             [](double v, const Record& r) { return v < r.timestamp; });
  return static_cast<size_t>(it - records_.begin());
}

std::optional<InterpolationPolicy> interpolation_from_name(const std::string& s) {
  if (s == "linear") return InterpolationPolicy::linear;
  if (s == "previous-value") return InterpolationPolicy::previous_value;
  if (s == "nearest") return InterpolationPolicy::nearest;
  return std::nullopt;
}

const char* to_name(InterpolationPolicy policy) {
  switch (policy) {
    case InterpolationPolicy::linear: return "linear";
    case InterpolationPolicy::previous_value: return "previous-value";
    case InterpolationPolicy::nearest: return "nearest";
  }
  return "?";
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& cell, size_t line_no) {
  std::string t = trim(cell);
  const char* first = t.data();
  const char* last = t.data() + t.size();
  double out = 0;
  auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last)
    throw TraceError("non-numeric cell '" + t + "' on line " +
                     std::to_string(line_no));
  return out;
}

}  // namespace

Trace parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    header = split_line(line);
    break;
  }
  if (header.empty()) throw TraceError("empty trace file");
  if (trim(header[0]) != "timestamp")
    throw TraceError("first column must be named 'timestamp'");
  if (header.size() < 2) throw TraceError("no variable columns");

  std::vector<std::string> variables;
  for (size_t i = 1; i < header.size(); ++i) {
    std::string name = trim(header[i]);
    if (name.empty()) throw TraceError("empty variable name in header");
    variables.push_back(name);
  }

  std::vector<Record> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw TraceError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " cells, found " +
                       std::to_string(cells.size()));
    Record rec;
    rec.timestamp = parse_number(cells[0], line_no);
    for (size_t i = 1; i < cells.size(); ++i) {
      std::string cell = trim(cells[i]);
      if (cell.empty()) continue;
      rec.values[variables[i - 1]] = parse_number(cell, line_no);
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw TraceError("trace has no records");
  return Trace(std::move(records), std::move(variables));
}

Trace load_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open trace file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string serialize_csv(const Trace& trace) {
  std::ostringstream os;
  os << "timestamp";
  for (const auto& v : trace.variables()) os << "," << v;
  os << "\n";
  for (const auto& rec : trace.records()) {
    os << format_double(rec.timestamp);
    for (const auto& v : trace.variables()) {
      os << ",";
      auto it = rec.values.find(v);
      if (it != rec.values.end()) os << format_double(it->second);
    }
    os << "\n";
  }
  return os.str();
}

namespace {

struct Samples {
  std::vector<double> ts;
  std::vector<double> vals;
};

double interpolate(const Samples& s, double t, InterpolationPolicy policy) {
  const auto& ts = s.ts;
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  size_t hi = static_cast<size_t>(it - ts.begin());
  if (hi < ts.size() && ts[hi] == t) return s.vals[hi];
  // t lies strictly between hi-1 and hi (or outside the defined span).
  switch (policy) {
    case InterpolationPolicy::linear: {
      if (hi == 0) return s.vals.front();
      if (hi == ts.size()) return s.vals.back();
      double t0 = ts[hi - 1], t1 = ts[hi];
      double v0 = s.vals[hi - 1], v1 = s.vals[hi];
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
    case InterpolationPolicy::previous_value:
      return hi == 0 ? s.vals.front() : s.vals[hi - 1];
    case InterpolationPolicy::nearest: {
      if (hi == 0) return s.vals.front();
      if (hi == ts.size()) return s.vals.back();
      double dl = t - ts[hi - 1], dr = ts[hi] - t;
      return dl <= dr ? s.vals[hi - 1] : s.vals[hi];
    }
  }
  return 0;
}

}  // namespace

Trace prepare(const Trace& trace, const std::set<std::string>& used_vars,
              InterpolationPolicy policy,
              const std::map<std::string, InterpolationPolicy>& per_var) {
  if (used_vars.empty()) throw TraceError("no variables to prepare");
  for (const auto& v : used_vars)
    if (!trace.has_variable(v))
      throw TraceError("variable '" + v + "' not present in trace");

  std::vector<Record> kept;
  for (const auto& rec : trace.records()) {
    bool any = false;
    Record out;
    out.timestamp = rec.timestamp;
    for (const auto& v : used_vars) {
      auto it = rec.values.find(v);
      if (it != rec.values.end()) {
        out.values[v] = it->second;
        any = true;
      }
    }
    if (any) kept.push_back(std::move(out));
  }
  if (kept.empty())
    throw TraceError("no record carries a value for the requested variables");

  for (const auto& v : used_vars) {
    Samples defined;
    bool gaps = false;
    for (const auto& rec : kept) {
      auto it = rec.values.find(v);
      if (it != rec.values.end()) {
        defined.ts.push_back(rec.timestamp);
        defined.vals.push_back(it->second);
      } else {
        gaps = true;
      }
    }
    if (defined.ts.empty())
      throw TraceError("variable '" + v + "' has no defined samples");
    if (!gaps) continue;
    InterpolationPolicy p = policy;
    auto pv = per_var.find(v);
    if (pv != per_var.end()) p = pv->second;
    if (p == InterpolationPolicy::linear && defined.ts.size() < 2)
      throw TraceError("variable '" + v +
                       "' has a single defined sample; linear interpolation "
                       "needs at least two");
    for (auto& rec : kept) {
      if (!rec.values.count(v))
        rec.values[v] = interpolate(defined, rec.timestamp, p);
    }
  }

  std::vector<std::string> variables(used_vars.begin(), used_vars.end());
  return Trace(std::move(kept), std::move(variables));
}

double signal_value(const Trace& trace, const std::string& var, double t) {
  auto idx = trace.index_of(t);
  if (!idx)
    throw TraceError("t=" + format_double(t) + " is not a sample timestamp");
  return trace.value(*idx, var);
}

double signal_value_at(const Trace& trace, const SignalExpr& expr, size_t index) {
  switch (expr.kind) {
    case SignalExpr::Kind::variable: return trace.value(index, expr.name);
    case SignalExpr::Kind::constant: return expr.value;
    case SignalExpr::Kind::binary: {
      double l = signal_value_at(trace, *expr.lhs, index);
      double r = signal_value_at(trace, *expr.rhs, index);
      switch (expr.op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        case '/': return l / r;
      }
      throw TraceError("unknown operator in signal expression");
    }
  }
  throw TraceError("malformed signal expression");
}

double signal_value(const Trace& trace, const SignalExpr& expr, double t) {
  auto idx = trace.index_of(t);
  if (!idx)
    throw TraceError("t=" + format_double(t) + " is not a sample timestamp");
  return signal_value_at(trace, expr, *idx);
}

}  // namespace sigdiag
