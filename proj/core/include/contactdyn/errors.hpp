#pragma once

#include <stdexcept>
#include <string>

namespace contactdyn {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A model or state produced NaN/Inf.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Point outside a model's domain (e.g. y <= -B for Gierer-Meinhardt).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// The velocity Hessian W of a contact Lagrangian is (numerically) singular.
class RegularityError : public Error {
 public:
  RegularityError(const std::string& what, double rcond)
      : Error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

// Throws NonFiniteError naming `what` when `value` is NaN or infinite.
double require_finite(double value, const char* what);

}  // namespace contactdyn
