#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gerbelab {

enum class Errc {
  DegenerateSimplex,
  DimensionTooLarge,
  VertexOutOfRange,
  InvalidGroup,
  InvalidTwist,
  DegreeOverflow,
  UnsupportedCoefficient,
  NotACocycle,
  NotU1Cocycle,
  LiftNotIntegral,
  LiftMismatch,
  ValueNotInKernel,
  CocycleIdentityViolated,
  ShapeMismatch,
  TruncationTooSmall,
  GridTooCoarse,
  PointOutsideCharts,
  NoOverlap,
  NotClosedSurface,
  Parse,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gerbelab
