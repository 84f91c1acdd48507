#ifndef JSCC_ERROR_HPP
#define JSCC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace jscc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class NonConvergence : public Error {
public:
  using Error::Error;
};

class ReducibleMatrix : public Error {
public:
  using Error::Error;
};

class Periodic : public Error {
public:
  using Error::Error;
};

class AssumptionViolated : public Error {
public:
  using Error::Error;
};

/// Argument outside the image of a monotone map (a outside (a_lo, a_hi), etc.).
class OutOfRange : public Error {
public:
  using Error::Error;
};

class RateOutOfRange : public Error {
public:
  using Error::Error;
};

class TooLarge : public Error {
public:
  using Error::Error;
};

class DegenerateDispersion : public Error {
public:
  using Error::Error;
};

class SandwichViolation : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace jscc

#endif  // JSCC_ERROR_HPP
