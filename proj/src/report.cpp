#include "sigdiag/report.hpp"

#include <cmath>

namespace sigdiag {

namespace {

// Doubles are routed through format_double so documents stay byte-stable.
Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return Json::parse(format_double(v));
}

Json interval_json(const EvaluationInterval& iv) {
  return Json::array({num(iv.lower), num(iv.upper)});
}

Json record_json(const RecordRef& r) {
  return Json::array({num(r.t), num(r.value)});
}

}  // namespace

Json payload_to_json(const DiagnosisPayload& payload) {
  Json out;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RecordPairPayload>) {
          out["records"] = Json::array({record_json(p.first), record_json(p.second)});
        } else if constexpr (std::is_same_v<T, RecordWithValues>) {
          out["timestamp"] = num(p.t);
          Json values;
          for (const auto& [k, v] : p.values) values[k] = num(v);
          out["values"] = std::move(values);
        } else if constexpr (std::is_same_v<T, IntervalWithValue>) {
          out["interval"] = interval_json(p.interval);
          out["value"] = num(p.value);
        } else if constexpr (std::is_same_v<T, IntervalOnly>) {
          out["interval"] = interval_json(p.interval);
        } else if constexpr (std::is_same_v<T, IntervalAndBoundary>) {
          out["interval"] = interval_json(p.interval);
          out["boundary"] = num(p.boundary);
        } else if constexpr (std::is_same_v<T, IntervalAndBoundaries>) {
          out["interval"] = interval_json(p.interval);
          out["boundaries"] = Json::array({num(p.first), num(p.second)});
        } else if constexpr (std::is_same_v<T, IntervalWithDistance>) {
          out["interval"] = interval_json(p.interval);
          out["distance"] = num(p.distance);
        }
      },
      payload);
  return out;
}

Json check_document(const std::string& trace_path,
                    const std::string& property_path, bool verdict,
                    std::chrono::milliseconds duration) {
  Json doc;
  doc["tool"] = kToolVersion;
  doc["trace"] = trace_path;
  doc["property"] = property_path;
  doc["verdict"] = verdict;
  doc["duration_ms"] = duration.count();
  return doc;
}

Json diagnose_document(const std::string& trace_path,
                       const std::string& property_path,
                       const DiagnosisReport& report) {
  Json doc;
  doc["tool"] = kToolVersion;
  doc["trace"] = trace_path;
  doc["property"] = property_path;
  doc["verdict"] = report.property_holds;
  Json atoms = Json::array();
  for (const auto& outcome : report.atoms) {
    Json entry;
    entry["index"] = outcome.index;
    entry["text"] = outcome.text;
    entry["verdict"] = outcome.holds;
    if (outcome.diagnosis) {
      const auto& d = *outcome.diagnosis;
      entry["cause"] = to_string(d.cause);
      entry["dual"] = d.dual;
      entry["polarity"] =
          d.polarity == ShapePolarity::as_written ? "as-written" : "dual";
      entry["diagnosis"] = d.id;
      entry["payload"] = payload_to_json(d.payload);
    } else {
      entry["cause"] = nullptr;
      entry["dual"] = false;
      entry["polarity"] = "as-written";
      entry["diagnosis"] = nullptr;
      entry["payload"] = nullptr;
    }
    atoms.push_back(std::move(entry));
  }
  doc["atoms"] = std::move(atoms);
  doc["duration_ms"] = report.duration.count();
  doc["timeout"] = report.timed_out;
  return doc;
}

Json batch_document(const std::string& manifest_path,
                    const std::vector<BatchResult>& results) {
  Json doc;
  doc["tool"] = kToolVersion;
  doc["manifest"] = manifest_path;
  Json pairs = Json::array();
  size_t finished = 0;
  size_t diagnosed = 0;
  for (const auto& result : results) {
    Json entry;
    entry["trace"] = result.item.trace_path;
    entry["property"] = result.item.property_path;
    if (!result.error.empty()) {
      entry["status"] = "error";
      entry["error"] = result.error;
    } else {
      const auto& report = *result.report;
      entry["status"] = report.timed_out ? "timeout" : "ok";
      entry["document"] =
          diagnose_document(result.item.trace_path, result.item.property_path,
                            report);
      if (!report.timed_out) {
        ++finished;
        for (const auto& outcome : report.atoms)
          if (outcome.diagnosis) {
            ++diagnosed;
            break;
          }
      }
    }
    pairs.push_back(std::move(entry));
  }
  doc["pairs"] = std::move(pairs);
  double total = results.empty() ? 1.0 : static_cast<double>(results.size());
  doc["finished_within_timeout_pct"] = num(100.0 * finished / total);
  doc["diagnosed_pct"] =
      num(finished == 0 ? 0.0 : 100.0 * diagnosed / finished);
  return doc;
}

std::string render(const Json& document) { return document.dump(2) + "\n"; }

}  // namespace sigdiag
