#pragma once

#include <stdexcept>
#include <string>

namespace chainkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid measure-space construction (bad rule order, duplicate nodes, ...).
class MeasureError : public Error {
 public:
  using Error::Error;
};

/// Coupling evaluation outside its domain (power-law pole, series overflow).
class CouplingError : public Error {
 public:
  using Error::Error;
};

/// A chain definition failed validation; what() lists every violation.
class ChainError : public Error {
 public:
  using Error::Error;
};

/// A leading principal minor of the chain moment matrix vanished, so no
/// biorthogonal system of this size exists.
class DegenerateEnsembleError : public Error {
 public:
  DegenerateEnsembleError(const std::string& what, int minor_index)
      : Error(what), minor_index_(minor_index) {}
  int minor_index() const noexcept { return minor_index_; }

 private:
  int minor_index_;
};

/// Non-finite values produced while propagating through the chain.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed perturbation, region or point request.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The ensemble is not a positive measure for this chain.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Syntax or semantic error in a config file. line() is 0 when the error is
/// not tied to a single line (e.g. a missing section).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace chainkit
