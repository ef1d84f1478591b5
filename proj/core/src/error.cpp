#include "oddsmith/error.hpp"

namespace oddsmith {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::AllMissing: return "AllMissing";
    case ErrorCode::UnknownResult: return "UnknownResult";
    case ErrorCode::UnknownTeam: return "UnknownTeam";
    case ErrorCode::NoPriorMatches: return "NoPriorMatches";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidHyperparams: return "InvalidHyperparams";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::FeatureMismatch: return "FeatureMismatch";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NonPositiveAfterClip: return "NonPositiveAfterClip";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidProbTriple: return "InvalidProbTriple";
    case ErrorCode::InvalidMargin: return "InvalidMargin";
    case ErrorCode::OddsBelowOne: return "OddsBelowOne";
    case ErrorCode::InvalidStake: return "InvalidStake";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::InvalidFormat: return "InvalidFormat";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(detail) {}

bool Error::is_input_error() const noexcept {
  switch (code_) {
    case ErrorCode::EmptyFile:
    case ErrorCode::MissingColumn:
    case ErrorCode::MalformedRow:
    case ErrorCode::AllMissing:
    case ErrorCode::UnknownResult:
    case ErrorCode::UnknownTeam:
    case ErrorCode::VersionMismatch:
    case ErrorCode::InvalidFormat:
    case ErrorCode::InvalidConfig:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

}  // namespace oddsmith
