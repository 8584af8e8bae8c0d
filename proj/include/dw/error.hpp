#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dw {

enum class ErrorKind {
  NonManifoldEdge,
  NonManifold,
  NonOrientable,
  DegenerateTriangle,
  BoundaryEdge,
  CosphericalPair,
  EmptyPointSet,
  QuadratureNotConverged,
  InadmissibleTheta,
  EmptyDomain,
  DegenerateInput,
  AmbiguousCocircular,
  InsufficientProtection,
  NonManifoldOutput,
  CoplanarQuadruple,
  HemisphereEmpty,
  EmptyCandidateSet,
  NonIntegerColumns,
  SegmentExitsMesh,
  ZeroDual,
  ParseError,
  NonTriangleFace,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Exception type thrown by every dw module. The kind is the stable part;
/// the message carries context (indices, line numbers, values).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorKind::NonManifold: return "NonManifold";
    case ErrorKind::NonOrientable: return "NonOrientable";
    case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorKind::BoundaryEdge: return "BoundaryEdge";
    case ErrorKind::CosphericalPair: return "CosphericalPair";
    case ErrorKind::EmptyPointSet: return "EmptyPointSet";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::InadmissibleTheta: return "InadmissibleTheta";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::AmbiguousCocircular: return "AmbiguousCocircular";
    case ErrorKind::InsufficientProtection: return "InsufficientProtection";
    case ErrorKind::NonManifoldOutput: return "NonManifoldOutput";
    case ErrorKind::CoplanarQuadruple: return "CoplanarQuadruple";
    case ErrorKind::HemisphereEmpty: return "HemisphereEmpty";
    case ErrorKind::EmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorKind::NonIntegerColumns: return "NonIntegerColumns";
    case ErrorKind::SegmentExitsMesh: return "SegmentExitsMesh";
    case ErrorKind::ZeroDual: return "ZeroDual";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonTriangleFace: return "NonTriangleFace";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace dw
