#pragma once

#include <stdexcept>
#include <string>

namespace casimag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid material parameters, configuration files or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A perturbative formula was requested outside its domain of validity.
class ValidityError : public Error {
 public:
  using Error::Error;
};

/// A series or sum failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration returned a non-finite value or missed its tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace casimag
