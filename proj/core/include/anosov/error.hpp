#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class SingularMatrix : public Error {
  public:
    using Error::Error;
};

/// Spectrum touches the unit circle, or the splitting is outside the supported
/// range (purely expanding / purely contracting maps).
class NotHyperbolic : public Error {
  public:
    using Error::Error;
};

class NewtonFailure : public Error {
  public:
    NewtonFailure(const std::string& what, int branch) : Error(what), branch_(branch) {}
    int branch() const noexcept { return branch_; }

  private:
    int branch_;
};

class EnumerationCapExceeded : public Error {
  public:
    using Error::Error;
};

class DepthMismatch : public Error {
  public:
    using Error::Error;
};

class NumericalBreakdown : public Error {
  public:
    using Error::Error;
};

}  // namespace anosov
