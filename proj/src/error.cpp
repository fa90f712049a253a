#include "gerbelab/error.hpp"

namespace gerbelab {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DegenerateSimplex: return "DegenerateSimplex";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::VertexOutOfRange: return "VertexOutOfRange";
    case Errc::InvalidGroup: return "InvalidGroup";
    case Errc::InvalidTwist: return "InvalidTwist";
    case Errc::DegreeOverflow: return "DegreeOverflow";
    case Errc::UnsupportedCoefficient: return "UnsupportedCoefficient";
    case Errc::NotACocycle: return "NotACocycle";
    case Errc::NotU1Cocycle: return "NotU1Cocycle";
    case Errc::LiftNotIntegral: return "LiftNotIntegral";
    case Errc::LiftMismatch: return "LiftMismatch";
    case Errc::ValueNotInKernel: return "ValueNotInKernel";
    case Errc::CocycleIdentityViolated: return "CocycleIdentityViolated";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::TruncationTooSmall: return "TruncationTooSmall";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::PointOutsideCharts: return "PointOutsideCharts";
    case Errc::NoOverlap: return "NoOverlap";
    case Errc::NotClosedSurface: return "NotClosedSurface";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace gerbelab
