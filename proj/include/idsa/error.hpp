#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idsa {

/// Root of every error raised by the library. The CLI maps subclasses to
/// exit codes, so new failure kinds should derive from one of the groups
/// below rather than from this class directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual auto kind() const -> const char * = 0;
};

// -- argument / domain errors ------------------------------------------------

class InvalidArgument : public Error {
 public:
  using Error::Error;
  [[nodiscard]] auto kind() const -> const char * override { return "invalid-argument"; }
};

class DomainError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] auto kind() const -> const char * override { return "domain-error"; }
};

class DegenerateNorm : public Error {
 public:
  using Error::Error;
  [[nodiscard]] auto kind() const -> const char * override { return "degenerate-norm"; }
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
  [[nodiscard]] auto kind() const -> const char * override { return "division-by-zero"; }
};

class NoNeutrinosphere : public Error {
 public:
  using Error::Error;
  [[nodiscard]] auto kind() const -> const char * override { return "no-neutrinosphere"; }
};

// -- numerical failures --------------------------------------------------------

/// Base for failures of a numerical method on valid input.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public SolverFailure {
 public:
  QuadratureFailure(const std::string &what, std::size_t worst_cell, double worst_error)
      : SolverFailure(what), worst_cell_(worst_cell), worst_error_(worst_error) {}
  [[nodiscard]] auto kind() const -> const char * override { return "quadrature-failure"; }
  [[nodiscard]] auto worst_cell() const -> std::size_t { return worst_cell_; }
  [[nodiscard]] auto worst_error() const -> double { return worst_error_; }

 private:
  std::size_t worst_cell_;
  double worst_error_;
};

/// A solver produced a negative trapped or streaming density. Never clamped:
/// the failure modes this library studies must stay visible.
class NegativityError : public SolverFailure {
 public:
  NegativityError(const std::string &what, double time, std::size_t cell, double value)
      : SolverFailure(what), time_(time), cell_(cell), value_(value) {}
  [[nodiscard]] auto kind() const -> const char * override { return "negativity"; }
  [[nodiscard]] auto time() const -> double { return time_; }
  [[nodiscard]] auto cell() const -> std::size_t { return cell_; }
  [[nodiscard]] auto value() const -> double { return value_; }

 private:
  double time_;
  std::size_t cell_;
  double value_;
};

class NormalizationSingularity : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
  [[nodiscard]] auto kind() const -> const char * override { return "normalization-singularity"; }
};

class UnboundedSolution : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
  [[nodiscard]] auto kind() const -> const char * override { return "unbounded-solution"; }
};

/// A march reached t_end without meeting the stationarity tolerance.
class NotStationary : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
  [[nodiscard]] auto kind() const -> const char * override { return "not-stationary"; }
};

class InternalError : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
  [[nodiscard]] auto kind() const -> const char * override { return "internal-error"; }
};

// -- front-end errors ------------------------------------------------------------

class ConfigError : public Error {
 public:
  ConfigError(const std::string &key, const std::string &what)
      : Error("configuration error for key '" + key + "': " + what), key_(key) {}
  [[nodiscard]] auto kind() const -> const char * override { return "configuration"; }
  [[nodiscard]] auto key() const -> const std::string & { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] auto kind() const -> const char * override { return "io"; }
};

}  // namespace idsa
