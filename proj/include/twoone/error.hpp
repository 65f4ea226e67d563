#pragma once

#include <stdexcept>
#include <string>

namespace twoone {

/// Base of every domain error raised by the library. `kind()` is the stable
/// tag written into machine-readable CLI output.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define TWOONE_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                          \
   public:                                                             \
    using Error::Error;                                                \
    const char* kind() const noexcept override { return #Name; }       \
  };

// A bounded scan saw more preimages than the branching oracle allows.
TWOONE_DEFINE_ERROR(OracleViolation)
// Three or more preimages: not a (2,1):1 structure.
TWOONE_DEFINE_ERROR(StructureViolation)
TWOONE_DEFINE_ERROR(NotCyclic)
TWOONE_DEFINE_ERROR(NotATree)
TWOONE_DEFINE_ERROR(DepthMismatch)
TWOONE_DEFINE_ERROR(TooLarge)
// The two structures disagree where an isomorphism would force agreement.
TWOONE_DEFINE_ERROR(OracleMismatch)
TWOONE_DEFINE_ERROR(SeparationFailure)
TWOONE_DEFINE_ERROR(IncompleteMatching)
TWOONE_DEFINE_ERROR(UnknownIndex)
TWOONE_DEFINE_ERROR(MissingOracle)
TWOONE_DEFINE_ERROR(InvalidArgument)
// Malformed structure spec or registry file.
TWOONE_DEFINE_ERROR(SpecError)

#undef TWOONE_DEFINE_ERROR

}  // namespace twoone
