#pragma once

#include <stdexcept>
#include <string>

namespace coleman {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic in Z/p^W.
class NonUnit : public Error {
 public:
  using Error::Error;
};
class InexactDivision : public Error {
 public:
  using Error::Error;
};
// A denominator of valuation >= 2 showed up; the bound p > (2N-1)(2g+1)
// rules this out for valid input.
class ExcessValuation : public Error {
 public:
  using Error::Error;
};

class NotSquarefree : public Error {
 public:
  using Error::Error;
};
class NonUnitDenominator : public Error {
 public:
  using Error::Error;
};

// Wraps an InexactDivision/ExcessValuation raised inside the reduction.
class PrecisionViolation : public Error {
 public:
  using Error::Error;
};

class NonWeierstrassRequired : public Error {
 public:
  using Error::Error;
};
class WeierstrassDisk : public Error {
 public:
  using Error::Error;
};
class DifferentDisks : public Error {
 public:
  using Error::Error;
};
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class InvalidCurve : public Error {
 public:
  using Error::Error;
};
class InvalidPoint : public Error {
 public:
  using Error::Error;
};

}  // namespace coleman
