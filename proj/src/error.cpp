#include "arakelov/error.hpp"

namespace arakelov {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NonPrime: return "NonPrime";
    case Errc::PTooSmall: return "PTooSmall";
    case Errc::NonIntegralMass: return "NonIntegralMass";
    case Errc::ComponentOutOfRange: return "ComponentOutOfRange";
    case Errc::InvalidPermutation: return "InvalidPermutation";
    case Errc::GonalityPrecondition: return "GonalityPrecondition";
    case Errc::DimensionOverflow: return "DimensionOverflow";
    case Errc::GenusDegenerate: return "GenusDegenerate";
    case Errc::DimATooSmall: return "DimATooSmall";
    case Errc::PDegenerate: return "PDegenerate";
    case Errc::BadPrime: return "BadPrime";
    case Errc::SturmNotReached: return "SturmNotReached";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::TailBoundFailure: return "TailBoundFailure";
    case Errc::InvalidLedger: return "InvalidLedger";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

bool is_internal(Errc code) {
  return code == Errc::NonIntegralMass || code == Errc::InternalInvariant;
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace arakelov
