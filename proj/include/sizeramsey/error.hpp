#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sizeramsey {

enum class ErrorKind {
  InvalidArgument,
  // graph-core
  OddOrder,
  GenerationTimeout,
  TooSmall,
  TooLarge,
  OverlappingFamily,
  ParseError,
  // decompose
  IsK4,
  NotConnected,
  DegreeTooHigh,
  HasTriangle,
  NotBipartite,
  TooLargeForExact,
  // regularity
  EmptySide,
  Overlap,
  Exhausted,
  SliceTooLarge,
  // embedder
  Terminated,
  ClosureFailed,
  BudgetExceeded,
  BucketExhausted,
  ColoringInvalid,
  // ramsey-oracle
  TooManyEdges,
  PartitionDegenerate,
  // experiment-cli
  MalformedCSV,
  ConfigError,
  Internal,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OddOrder: return "OddOrder";
    case ErrorKind::GenerationTimeout: return "GenerationTimeout";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::OverlappingFamily: return "OverlappingFamily";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IsK4: return "IsK4";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorKind::HasTriangle: return "HasTriangle";
    case ErrorKind::NotBipartite: return "NotBipartite";
    case ErrorKind::TooLargeForExact: return "TooLargeForExact";
    case ErrorKind::EmptySide: return "EmptySide";
    case ErrorKind::Overlap: return "Overlap";
    case ErrorKind::Exhausted: return "Exhausted";
    case ErrorKind::SliceTooLarge: return "SliceTooLarge";
    case ErrorKind::Terminated: return "Terminated";
    case ErrorKind::ClosureFailed: return "ClosureFailed";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::BucketExhausted: return "BucketExhausted";
    case ErrorKind::ColoringInvalid: return "ColoringInvalid";
    case ErrorKind::TooManyEdges: return "TooManyEdges";
    case ErrorKind::PartitionDegenerate: return "PartitionDegenerate";
    case ErrorKind::MalformedCSV: return "MalformedCSV";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Library-wide exception. `vertex` names the offending pattern vertex for
/// embedding failures (Terminated, BucketExhausted).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::uint32_t> vertex = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        vertex_(vertex) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::uint32_t> vertex() const noexcept { return vertex_; }

 private:
  ErrorKind kind_;
  std::optional<std::uint32_t> vertex_;
};

}  // namespace sizeramsey
