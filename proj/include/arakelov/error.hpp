#pragma once

#include <stdexcept>
#include <string>

namespace arakelov {

enum class Errc {
  NonPrime,
  PTooSmall,
  NonIntegralMass,
  ComponentOutOfRange,
  InvalidPermutation,
  GonalityPrecondition,
  DimensionOverflow,
  GenusDegenerate,
  DimATooSmall,
  PDegenerate,
  BadPrime,
  SturmNotReached,
  NotPositiveDefinite,
  TailBoundFailure,
  InvalidLedger,
  InvalidArgument,
  InternalInvariant,
};

const char* errc_name(Errc code);

// True for codes that can only be produced by a bug (an invariant the
// construction guarantees was violated), never by bad user input.
bool is_internal(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace arakelov
