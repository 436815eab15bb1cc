#include "panelprobit/error.hpp"

namespace panelprobit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveRatio: return "NonPositiveRatio";
    case ErrorKind::DegenerateCounts: return "DegenerateCounts";
    case ErrorKind::NoSwitchers: return "NoSwitchers";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NonFiniteLikelihood: return "NonFiniteLikelihood";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::BoundarySigma: return "BoundarySigma";
    case ErrorKind::AllReplicationsFailed: return "AllReplicationsFailed";
    case ErrorKind::DivergentIntegrand: return "DivergentIntegrand";
    case ErrorKind::UnsupportedPrior: return "UnsupportedPrior";
    case ErrorKind::WrongHorizon: return "WrongHorizon";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::NonBinaryOutcome: return "NonBinaryOutcome";
    case ErrorKind::RaggedPanel: return "RaggedPanel";
    case ErrorKind::DuplicateRow: return "DuplicateRow";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveRatio:
    case ErrorKind::DegenerateCounts:
    case ErrorKind::NoSwitchers:
    case ErrorKind::Diverged:
    case ErrorKind::RankDeficient:
    case ErrorKind::NonFiniteLikelihood:
    case ErrorKind::NotConverged:
    case ErrorKind::BoundarySigma:
    case ErrorKind::AllReplicationsFailed:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message, nlohmann::ordered_json details)
    : std::runtime_error(message), kind_(kind), details_(std::move(details)) {}

}  // namespace panelprobit
