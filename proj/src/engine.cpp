#include "sigdiag/engine.hpp"

#include <atomic>
#include <thread>

#include "sigdiag/parser.hpp"

namespace sigdiag {

namespace {

bool expired(Deadline deadline) {
  return std::chrono::steady_clock::now() >= deadline;
}

}  // namespace

AtomDiagnosisResult diagnose_atom(const Trace& trace, const Atom& atom,
                                  Deadline deadline, const EvalOptions& opts) {
  AtomDiagnosisResult result;
  for (const auto& binding : causes_for(trace, atom)) {
    if (expired(deadline)) {
      result.timed_out = true;
      return result;
    }
    if (!check_cause(trace, binding, opts)) continue;
    if (expired(deadline)) {
      result.timed_out = true;
      return result;
    }
    result.diagnosis = build_diagnosis(trace, binding, opts);
    return result;
  }
  return result;
}

DiagnosisReport diagnose(const Trace& trace, const Property& property,
                         const RunConfig& config) {
  auto started = std::chrono::steady_clock::now();
  Deadline deadline = started + config.timeout;
  EvalOptions opts = config.eval_options();

  DiagnosisReport report;
  report.property_holds = eval_property(trace, property, opts).holds;

  auto atoms = atoms_of(property);
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (expired(deadline)) {
      report.timed_out = true;
      break;
    }
    AtomOutcome outcome;
    outcome.index = i;
    outcome.text = to_string(atoms[i]);
    outcome.holds = eval_atom(trace, atoms[i], opts).holds;
    if (!outcome.holds) {
      auto result = diagnose_atom(trace, atoms[i], deadline, opts);
      if (result.timed_out) {
        report.timed_out = true;
        break;
      }
      outcome.diagnosis = std::move(result.diagnosis);
    }
    report.atoms.push_back(std::move(outcome));
  }

  report.duration = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  return report;
}

namespace {

BatchResult run_one(const BatchItem& item, const RunConfig& config) {
  BatchResult result;
  result.item = item;
  try {
    Trace raw = load_csv_file(item.trace_path);
    Property property = load_property_file(item.property_path);
    result.property_text = to_string(property);
    Trace prepared =
        prepare(raw, used_variables(property), config.interpolation);
    result.report = diagnose(prepared, property, config);
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

}  // namespace

std::vector<BatchResult> run_batch(const std::vector<BatchItem>& items,
                                   const RunConfig& config, unsigned jobs) {
  std::vector<BatchResult> results(items.size());
  if (jobs <= 1 || items.size() <= 1) {
    for (size_t i = 0; i < items.size(); ++i)
      results[i] = run_one(items[i], config);
    return results;
  }
  std::vector<std::thread> workers;
  std::atomic<size_t> next{0};
  unsigned count = std::min<unsigned>(jobs, items.size());
  for (unsigned w = 0; w < count; ++w) {
    workers.emplace_back([&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= items.size()) return;
        results[i] = run_one(items[i], config);
      }
    });
  }
  for (auto& t : workers) t.join();
  return results;
}

}  // namespace sigdiag
