#pragma once

#include <json.hpp>
#include <string>

#include "sigdiag/engine.hpp"

namespace sigdiag {

inline constexpr const char* kToolVersion = "sigdiag 0.1.0";

using Json = nlohmann::ordered_json;

Json payload_to_json(const DiagnosisPayload& payload);

Json check_document(const std::string& trace_path,
                    const std::string& property_path, bool verdict,
                    std::chrono::milliseconds duration);

Json diagnose_document(const std::string& trace_path,
                       const std::string& property_path,
                       const DiagnosisReport& report);

Json batch_document(const std::string& manifest_path,
                    const std::vector<BatchResult>& results);

/// Two-space indent, trailing newline; key order is fixed by construction.
std::string render(const Json& document);

}  // namespace sigdiag
