#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace degen {

enum class ErrorCode {
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  UnboundParameter,
  InvalidDomain,
  NonRegularLevelSet,
  AmbiguousCell,
  InconsistentOrientation,
  TooManyComponents,
  ReducibleDegeneracy,
  NonSimpleTangency,
  ZeroOnRing,
  CrossCheckMismatch,
  StepTooCoarse,
  RingBifurcation,
  NewtonDivergence,
  ZeroOnCircle,
  AmbiguousRadius,
  MarginalLinearization,
  NotCompactifiable,
  SouthPoleDegenerate,
  OverlapMismatch,
  UnsupportedZeroKind,
  IncompleteCatalog,
  StartsOnRing,
  StepUnderflow,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnboundParameter: return "UnboundParameter";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::NonRegularLevelSet: return "NonRegularLevelSet";
    case ErrorCode::AmbiguousCell: return "AmbiguousCell";
    case ErrorCode::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorCode::TooManyComponents: return "TooManyComponents";
    case ErrorCode::ReducibleDegeneracy: return "ReducibleDegeneracy";
    case ErrorCode::NonSimpleTangency: return "NonSimpleTangency";
    case ErrorCode::ZeroOnRing: return "ZeroOnRing";
    case ErrorCode::CrossCheckMismatch: return "CrossCheckMismatch";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::RingBifurcation: return "RingBifurcation";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::ZeroOnCircle: return "ZeroOnCircle";
    case ErrorCode::AmbiguousRadius: return "AmbiguousRadius";
    case ErrorCode::MarginalLinearization: return "MarginalLinearization";
    case ErrorCode::NotCompactifiable: return "NotCompactifiable";
    case ErrorCode::SouthPoleDegenerate: return "SouthPoleDegenerate";
    case ErrorCode::OverlapMismatch: return "OverlapMismatch";
    case ErrorCode::UnsupportedZeroKind: return "UnsupportedZeroKind";
    case ErrorCode::IncompleteCatalog: return "IncompleteCatalog";
    case ErrorCode::StartsOnRing: return "StartsOnRing";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Base of every failure raised by the library. The code is stable and is
/// what reports serialize; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }
  const std::string& detail() const noexcept { return detail_; }

  /// Same error with a context prefix, e.g. "north chart" or "s=0.25".
  Error tagged(const std::string& context) const {
    return Error(code_, context + ": " + detail_);
  }

 private:
  ErrorCode code_;
  std::string detail_;
};

class SyntaxError : public Error {
 public:
  // offset is 1-based: the column of the offending character, or
  // size()+1 when input ended early.
  SyntaxError(std::size_t offset, std::vector<std::string> expected,
              const std::string& message)
      : Error(ErrorCode::SyntaxError,
              message + " at offset " + std::to_string(offset)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t offset, std::string name)
      : Error(ErrorCode::UnknownIdentifier,
              "'" + name + "' at offset " + std::to_string(offset)),
        offset_(offset),
        name_(std::move(name)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& identifier() const noexcept { return name_; }

 private:
  std::size_t offset_;
  std::string name_;
};

}  // namespace degen
