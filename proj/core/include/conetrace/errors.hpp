#pragma once

#include <stdexcept>
#include <string>

namespace conetrace {

enum class ErrorKind {
  InvalidArgument,
  GeometricSet,
  PolicyMismatch,
  NonPositiveRadius,
  LeftAtlas,
  StepFailure,
  NoConvergence,
  ConjugateDegeneracy,
  SeriesStartFailure,
  CurvatureEvaluationFailure,
  ChainMismatch,
  NotStrictlyDiffractive,
  QuadratureFailure,
  WallInfluence,
  BesselFailure,
  IllConditioned,
  NoCriticalPoint,
  QuadratureDivergence,
  ConfigError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace conetrace
