#include "conetrace/errors.hpp"

namespace conetrace {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GeometricSet: return "GeometricSet";
    case ErrorKind::PolicyMismatch: return "PolicyMismatch";
    case ErrorKind::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorKind::LeftAtlas: return "LeftAtlas";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ConjugateDegeneracy: return "ConjugateDegeneracy";
    case ErrorKind::SeriesStartFailure: return "SeriesStartFailure";
    case ErrorKind::CurvatureEvaluationFailure: return "CurvatureEvaluationFailure";
    case ErrorKind::ChainMismatch: return "ChainMismatch";
    case ErrorKind::NotStrictlyDiffractive: return "NotStrictlyDiffractive";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::WallInfluence: return "WallInfluence";
    case ErrorKind::BesselFailure: return "BesselFailure";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NoCriticalPoint: return "NoCriticalPoint";
    case ErrorKind::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace conetrace
