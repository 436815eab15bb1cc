#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace panelprobit {

enum class ErrorKind {
  // numerical failures (data are valid but the estimator is undefined)
  NonPositiveRatio,
  DegenerateCounts,
  NoSwitchers,
  Diverged,
  RankDeficient,
  NonFiniteLikelihood,
  NotConverged,
  BoundarySigma,
  AllReplicationsFailed,
  // caller or input errors
  DivergentIntegrand,
  UnsupportedPrior,
  WrongHorizon,
  SchemaError,
  NonBinaryOutcome,
  RaggedPanel,
  DuplicateRow,
  ConfigError,
  UsageError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures of the estimation itself, as opposed to bad input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        nlohmann::ordered_json details = nlohmann::ordered_json::object());

  ErrorKind kind() const noexcept { return kind_; }
  const nlohmann::ordered_json& details() const noexcept { return details_; }

 private:
  ErrorKind kind_;
  nlohmann::ordered_json details_;
};

}  // namespace panelprobit
