#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dynroute {

enum class ErrorCode {
  MalformedRow,
  DuplicateNodeId,
  UnknownCategory,
  DanglingEndpoint,
  EmptyTimeline,
  MalformedTimeline,
  Unsatisfiable,
  EmptyGraph,
  InvalidThresholds,
  DeadEnd,
  InconsistentMembership,
  ZeroSpeed,
  Unreachable,
  NonPositiveWeight,
  MissingEdge,
  EmptyInput,
  Io,
  InvalidConfig,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "malformed row";
    case ErrorCode::DuplicateNodeId: return "duplicate node id";
    case ErrorCode::UnknownCategory: return "unknown category";
    case ErrorCode::DanglingEndpoint: return "dangling endpoint";
    case ErrorCode::EmptyTimeline: return "empty timeline";
    case ErrorCode::MalformedTimeline: return "malformed timeline";
    case ErrorCode::Unsatisfiable: return "unsatisfiable";
    case ErrorCode::EmptyGraph: return "empty graph";
    case ErrorCode::InvalidThresholds: return "invalid thresholds";
    case ErrorCode::DeadEnd: return "dead end";
    case ErrorCode::InconsistentMembership: return "inconsistent membership";
    case ErrorCode::ZeroSpeed: return "zero speed";
    case ErrorCode::Unreachable: return "unreachable";
    case ErrorCode::NonPositiveWeight: return "non-positive weight";
    case ErrorCode::MissingEdge: return "missing edge";
    case ErrorCode::EmptyInput: return "empty input";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::InvalidConfig: return "invalid config";
    case ErrorCode::InvalidArgument: return "invalid argument";
  }
  return "unknown error";
}

/// Every failure raised by the library. `code()` identifies the failure class;
/// `what()` is "<code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dynroute
