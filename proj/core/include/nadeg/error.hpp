#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nadeg {

enum class ErrorKind {
  // geometry / expint
  DegeneratePolytope,
  DegenerateSimplex,
  UnboundedPolytope,
  InconsistentRepresentation,
  UnsupportedOrder,
  // filtration / measure
  NonpositiveScale,
  MissingTorusWeights,
  MissingLevel,
  DimensionMismatch,
  NotABasis,
  InvalidFlag,
  InvalidWeightFiltration,
  // functionals
  NegativeSupport,
  InconsistentDecomposition,
  InsufficientDegrees,
  // optimize
  OriginNotInterior,
  NonConvergence,
  DenominatorVanishes,
  InvalidVolumeFunction,
  // input handling
  ParseError,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

// Input errors map to CLI exit code 2, everything else is a domain error (exit 1).
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nadeg
