#pragma once

#include <string>

#include "sigdiag/engine.hpp"
#include "sigdiag/parser.hpp"
#include "sigdiag/testkit.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(SIGDIAG_TEST_DATA_DIR) + "/" + name;
}

inline sigdiag::Trace load_trace(const std::string& name) {
  return sigdiag::load_csv_file(data_path(name));
}

inline sigdiag::Property load_property(const std::string& name) {
  return sigdiag::load_property_file(data_path(name));
}

/// Full pipeline on a fixture pair: load, prepare, diagnose.
inline sigdiag::DiagnosisReport run_pair(const std::string& trace_name,
                                         const std::string& property_name,
                                         sigdiag::RunConfig config = {}) {
  auto property = load_property(property_name);
  auto trace = sigdiag::prepare(load_trace(trace_name),
                                sigdiag::used_variables(property),
                                config.interpolation);
  return sigdiag::diagnose(trace, property, config);
}

inline const sigdiag::DiagnosisInstance& first_diagnosis(
    const sigdiag::DiagnosisReport& report) {
  for (const auto& outcome : report.atoms)
    if (outcome.diagnosis) return *outcome.diagnosis;
  throw std::runtime_error("report carries no diagnosis");
}

}  // namespace testutil
