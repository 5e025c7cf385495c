#pragma once

#include <stdexcept>
#include <string>

namespace sgq {

// Base type for everything thrown by this library. Scenario runners catch
// these and turn them into failed reports instead of crashing the process.
struct Error : std::runtime_error {
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

#define SGQ_DEFINE_ERROR(NAME)                         \
  struct NAME : Error {                                \
    explicit NAME(const std::string& what_arg)         \
        : Error(std::string(#NAME) + ": " + what_arg) {} \
  }

SGQ_DEFINE_ERROR(DuplicateGenerator);
SGQ_DEFINE_ERROR(OddInvertible);
SGQ_DEFINE_ERROR(BadRelation);
SGQ_DEFINE_ERROR(AlgebraMismatch);
SGQ_DEFINE_ERROR(UnknownGenerator);
SGQ_DEFINE_ERROR(NegativePower);
SGQ_DEFINE_ERROR(NotInvertible);
SGQ_DEFINE_ERROR(NonHomogeneous);
SGQ_DEFINE_ERROR(IllDefinedOnQuotient);
SGQ_DEFINE_ERROR(MapNotWellDefined);
SGQ_DEFINE_ERROR(DegreeMismatch);
SGQ_DEFINE_ERROR(NotSquareZero);
SGQ_DEFINE_ERROR(NotChainMap);
SGQ_DEFINE_ERROR(NonZeroComposite);
SGQ_DEFINE_ERROR(WindowTooSmall);
SGQ_DEFINE_ERROR(WeightOverflow);
SGQ_DEFINE_ERROR(AlphaNotClosed);
SGQ_DEFINE_ERROR(BadDimension);
SGQ_DEFINE_ERROR(NotNilpotent);
SGQ_DEFINE_ERROR(NoRationalTriple);
SGQ_DEFINE_ERROR(GradingNotIntegral);
SGQ_DEFINE_ERROR(PairingDegenerateOnGm1);
SGQ_DEFINE_ERROR(NotStabilizer);
SGQ_DEFINE_ERROR(NotSubalgebra);
SGQ_DEFINE_ERROR(JacobiFails);
SGQ_DEFINE_ERROR(PairingNotInvariant);
SGQ_DEFINE_ERROR(DimensionMismatch);
SGQ_DEFINE_ERROR(ActionNotLie);
SGQ_DEFINE_ERROR(RouteFlagMismatch);
SGQ_DEFINE_ERROR(CertificateInvalid);
SGQ_DEFINE_ERROR(RetractBroken);
SGQ_DEFINE_ERROR(BadParameter);
SGQ_DEFINE_ERROR(UnsupportedGroup);
SGQ_DEFINE_ERROR(RelationalBaseUnsupported);
SGQ_DEFINE_ERROR(NotTwoForm);
SGQ_DEFINE_ERROR(TrivializationInvalid);
SGQ_DEFINE_ERROR(OddShift);
SGQ_DEFINE_ERROR(UnsupportedShift);
SGQ_DEFINE_ERROR(NotSemidensity);
SGQ_DEFINE_ERROR(NotUnit);
SGQ_DEFINE_ERROR(UnknownScenario);

#undef SGQ_DEFINE_ERROR

}  // namespace sgq
