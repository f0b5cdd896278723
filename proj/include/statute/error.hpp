#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace statute {

enum class ErrorCode {
  // statute model / parser
  BadIdentifier,
  MalformedEnumerator,
  IndentationJump,
  DuplicateSibling,
  // facts and CPI ingestion
  MissingKey,
  UnknownKey,
  BadValue,
  BadDate,
  InconsistentSpouse,
  WrongCount,
  BadCpiLine,
  // evaluation
  MissingCpiYear,
  UnsupportedYear,
  ItemizerUnsupported,
  MissingProvision,
  UnmodeledRule,
  // transforms
  TargetMissing,
  LiteralMismatch,
  SpanMismatch,
  InvalidMutation,
  // harnesses
  InvalidArgument,
  UnknownProperty,
  // reasoner bridge
  TransportFailure,
  ParseFailure,
  TranscriptMiss,
  TaskMismatch,
  TemplateMissing,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI's exit-status mapping) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace statute
