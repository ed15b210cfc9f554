#pragma once

#include <stdexcept>
#include <string>

namespace ecgen {

// Base class for all typed library errors. The CLI maps these onto exit
// codes: 1 I/O, 2 scope/scale, 3 precondition, 4 verification failure.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
  using Error::Error;
};

// Raised when the trivial additive character (j = 0 mod p) is requested;
// callers must branch on the trivial case explicitly.
struct TrivialCharacter : Error {
  using Error::Error;
};

struct DomainMismatch : Error {
  using Error::Error;
};

// An enumeration budget (q^m cap, extension search, box count) was exceeded.
struct ScaleLimit : Error {
  using Error::Error;
};

struct SupersingularCurve : Error {
  using Error::Error;
};

// Ideal not coprime to the conductor; unique factorization unavailable.
struct ConductorCollision : Error {
  using Error::Error;
};

struct NotInvertible : Error {
  using Error::Error;
};

// Denominator of a fractional endomorphism shares a factor with the order
// of the point it is applied to.
struct DenominatorCollision : Error {
  using Error::Error;
};

struct InvalidConfiguration : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct VerificationFailure : Error {
  using Error::Error;
};

}  // namespace ecgen
