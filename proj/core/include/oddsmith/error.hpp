#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oddsmith {

enum class ErrorCode {
  // ingestion and encoding
  EmptyFile,
  MissingColumn,
  MalformedRow,
  AllMissing,
  UnknownResult,
  UnknownTeam,
  NoPriorMatches,
  InsufficientData,
  // training and prediction
  InvalidHyperparams,
  EmptyTrainingSet,
  KTooLarge,
  NonFiniteFeature,
  NotNormalized,
  FeatureMismatch,
  // feature selection
  KOutOfRange,
  TooFewRows,
  // metrics
  LengthMismatch,
  Empty,
  UnknownLabel,
  // odds
  NonPositiveAfterClip,
  InvalidProbability,
  InvalidProbTriple,
  InvalidMargin,
  OddsBelowOne,
  InvalidStake,
  // serialization and configuration
  VersionMismatch,
  InvalidFormat,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  /// True for problems with user-supplied input files or configuration.
  bool is_input_error() const noexcept;

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace oddsmith
