#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace capflow {

enum class ErrorKind {
  GridTooSmall,
  NonPositiveRho,
  ZeroVolume,
  DegenerateWeight,
  NonPositiveTarget,
  SearchBracketFailure,
  InvalidInitialData,
  NonPositiveH,
  ConvexityLost,
  CurvatureFloorHit,
  ContactAngleLost,
  ParseError,
  ValidationError,
  NotConverged,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the integrator when a guard fires; carries the offending node and time.
class FlowAborted : public Error {
 public:
  FlowAborted(ErrorKind kind, const std::string& what, int node, double t)
      : Error(kind, what), node_(node), t_(t) {}

  int node() const noexcept { return node_; }
  double time() const noexcept { return t_; }

 private:
  int node_;
  double t_;
};

}  // namespace capflow
