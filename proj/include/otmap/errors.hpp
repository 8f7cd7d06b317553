#pragma once

#include <stdexcept>
#include <string>

namespace otmap {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define OTMAP_DEFINE_ERROR(NAME)                                           \
  class NAME : public Error {                                              \
  public:                                                                  \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {}   \
  }

OTMAP_DEFINE_ERROR(QuadratureFailure);
OTMAP_DEFINE_ERROR(NonIntegrable);
OTMAP_DEFINE_ERROR(InvalidDeclaration);
OTMAP_DEFINE_ERROR(NonFiniteDensity);
OTMAP_DEFINE_ERROR(RootBracketFailure);
OTMAP_DEFINE_ERROR(OutOfDomain);
OTMAP_DEFINE_ERROR(SupportMismatch);
OTMAP_DEFINE_ERROR(DivergentIteration);
OTMAP_DEFINE_ERROR(DegenerateConstruction);
OTMAP_DEFINE_ERROR(InvalidDimension);
OTMAP_DEFINE_ERROR(PreconditionViolated);
OTMAP_DEFINE_ERROR(ConfigError);

#undef OTMAP_DEFINE_ERROR

}  // namespace otmap
