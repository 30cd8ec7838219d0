#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace craic {

enum class ErrorCode {
  InvalidArgument,
  UnterminatedLiteral,
  UnterminatedComment,
  BraceImbalance,
  EmptyCorpus,
  InsufficientPairs,
  EmptyStream,
  NonFiniteState,
  DivergenceDetected,
  ZeroLength,
  VocabMismatch,
  UnknownPairId,
  MissingArtifact,
  StaleArtifact,
  ConfigInvalid,
  FormatError,
  LockHeld,
  IoError,
};

std::string_view errorCodeName(ErrorCode code);

/// Every recoverable failure in the toolkit is reported as a craic::Error.
/// The code is stable and machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace craic
