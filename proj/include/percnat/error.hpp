#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace percnat {

enum class ErrorKind {
  DomainTooSmall,
  InvalidPolygon,
  NotBoundaryEdge,
  SameMarkedEdge,
  NoBoundaryCondition,
  NonPositiveXi,
  QuadOutsideDomain,
  MarkedEdgeCollision,
  AnnulusOutsideDomain,
  UnsupportedPattern,
  BoxOutsideDomain,
  EmptyShape,
  NotDyadic,
  EpsilonTooLarge,
  NoHits,
  MissingTimes,
  NonPositiveEstimate,
  TooFewPoints,
  UnknownExperiment,
  ConfigInvalid,
  FormatError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers and tests can branch on the reason rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainTooSmall: return "DomainTooSmall";
    case ErrorKind::InvalidPolygon: return "InvalidPolygon";
    case ErrorKind::NotBoundaryEdge: return "NotBoundaryEdge";
    case ErrorKind::SameMarkedEdge: return "SameMarkedEdge";
    case ErrorKind::NoBoundaryCondition: return "NoBoundaryCondition";
    case ErrorKind::NonPositiveXi: return "NonPositiveXi";
    case ErrorKind::QuadOutsideDomain: return "QuadOutsideDomain";
    case ErrorKind::MarkedEdgeCollision: return "MarkedEdgeCollision";
    case ErrorKind::AnnulusOutsideDomain: return "AnnulusOutsideDomain";
    case ErrorKind::UnsupportedPattern: return "UnsupportedPattern";
    case ErrorKind::BoxOutsideDomain: return "BoxOutsideDomain";
    case ErrorKind::EmptyShape: return "EmptyShape";
    case ErrorKind::NotDyadic: return "NotDyadic";
    case ErrorKind::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorKind::NoHits: return "NoHits";
    case ErrorKind::MissingTimes: return "MissingTimes";
    case ErrorKind::NonPositiveEstimate: return "NonPositiveEstimate";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::UnknownExperiment: return "UnknownExperiment";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::FormatError: return "FormatError";
  }
  return "Unknown";
}

}  // namespace percnat
