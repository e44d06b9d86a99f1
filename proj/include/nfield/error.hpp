#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nfield {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array lengths or grids that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse for the requested construction.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Interior region with the requested margin is empty.
class EmptyInteriorError : public Error {
 public:
  using Error::Error;
};

/// Operation needs an invertible firing rate.
class InvertibilityError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Empty or otherwise unusable input collection.
class InputError : public Error {
 public:
  using Error::Error;
};

/// I/O failure while writing or reading a file.
class PersistenceError : public Error {
 public:
  using Error::Error;
};

class SnapshotError : public Error {
 public:
  enum class Kind { BadMagic, UnsupportedVersion, Truncated, Malformed };

  SnapshotError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Non-finite state during time stepping.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t step)
      : Error("state became non-finite at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Config text rejected; line() is 1-based, 0 when the problem is not tied to a line.
class ConfigError : public Error {
 public:
  enum class Kind { Syntax, UnknownKey, Malformed, Constraint };

  ConfigError(Kind kind, std::size_t line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), kind_(kind), line_(line) {}
  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

}  // namespace nfield
