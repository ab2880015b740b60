#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vkit {

/// Every failure raised by the library carries one of these kinds so that
/// callers (the CLI in particular) can map errors to exit codes without
/// parsing messages.
enum class ErrorKind {
  NonSquare,
  NonFinite,
  NonSymmetric,
  NegativeDistance,
  NonzeroDiagonal,
  TriangleViolation,
  EmptySet,
  InvalidIndex,
  InvalidMeasure,
  UnboundedCover,
  UncoveredPoint,
  UnsupportedCover,
  DegenerateGap,
  ZeroMass,
  NoMCP,
  BoundViolated,
  OutOfDomain,
  NoLabel,
  NotSubordinate,
  SkeletonTooShallow,
  InvalidArgument,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NegativeDistance: return "NegativeDistance";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::TriangleViolation: return "TriangleViolation";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::UnboundedCover: return "UnboundedCover";
    case ErrorKind::UncoveredPoint: return "UncoveredPoint";
    case ErrorKind::UnsupportedCover: return "UnsupportedCover";
    case ErrorKind::DegenerateGap: return "DegenerateGap";
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::NoMCP: return "NoMCP";
    case ErrorKind::BoundViolated: return "BoundViolated";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NoLabel: return "NoLabel";
    case ErrorKind::NotSubordinate: return "NotSubordinate";
    case ErrorKind::SkeletonTooShallow: return "SkeletonTooShallow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Exception type for all library errors. `indices` carries the structured
/// payload of the error (e.g. the (i, j, k) of a triangle violation, the
/// offending simplex id, or the support points outside a cover element).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<std::size_t> indices = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        indices_(std::move(indices)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  ErrorKind kind_;
  std::vector<std::size_t> indices_;
};

}  // namespace vkit
