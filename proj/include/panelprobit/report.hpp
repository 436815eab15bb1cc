#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "panelprobit/error.hpp"
#include "panelprobit/simulation.hpp"

namespace panelprobit {

inline constexpr int kSchemaVersion = 1;

struct ReportedParameter {
  std::string name;
  double estimate = 0.0;
  std::optional<double> se;  // serialized as "unavailable" when absent or not finite
};

struct Provenance {
  std::string input_digest;  // "sha256:<hex>"
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed;
};

nlohmann::ordered_json provenance_json(const Provenance& provenance);

/// {"schema_version", "status": "ok", "method", "parameters", "diagnostics", "provenance"}
nlohmann::ordered_json estimate_result_json(std::string_view method, const std::vector<ReportedParameter>& parameters,
                                            const nlohmann::ordered_json& diagnostics, const Provenance& provenance);

/// {"schema_version", "status": "error", "error": {"kind", "category", "message", "details"}}
nlohmann::ordered_json error_json(const Error& error);

nlohmann::ordered_json rmse_report_json(const RmseReport& report, const Provenance& provenance);

/// One row per estimator and parameter.
std::string rmse_report_csv(const RmseReport& report);

}  // namespace panelprobit
