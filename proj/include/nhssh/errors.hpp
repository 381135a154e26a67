// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nhssh {

/// Base class for every failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short stable identifier used in manifests and exit-code mapping.
  virtual const char* kind() const noexcept { return "Error"; }
};

/// Failures that mean "the arithmetic ran out of headroom": raise digits or the twist.
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NumericalError"; }
};

#define NHSSH_DEFINE_ERROR(Name, Base)                                   \
  class Name : public Base {                                            \
   public:                                                              \
    using Base::Base;                                                   \
    const char* kind() const noexcept override { return #Name; }        \
  };

NHSSH_DEFINE_ERROR(DomainError, NumericalError)
NHSSH_DEFINE_ERROR(SingularMatrix, NumericalError)
NHSSH_DEFINE_ERROR(NoConvergence, NumericalError)
NHSSH_DEFINE_ERROR(NearDefective, NumericalError)
NHSSH_DEFINE_ERROR(BranchInconsistency, NumericalError)
NHSSH_DEFINE_ERROR(DefectivePoint, NumericalError)
NHSSH_DEFINE_ERROR(PairingMismatch, NumericalError)
NHSSH_DEFINE_ERROR(ComplexSpectrum, NumericalError)
NHSSH_DEFINE_ERROR(DegenerateGround, NumericalError)

NHSSH_DEFINE_ERROR(PhaseError, Error)
NHSSH_DEFINE_ERROR(SizeError, Error)
NHSSH_DEFINE_ERROR(ConfigError, Error)
NHSSH_DEFINE_ERROR(OracleMismatch, Error)

#undef NHSSH_DEFINE_ERROR

}  // namespace nhssh
