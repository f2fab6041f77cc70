#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bimdecomp {

// Base class for every error thrown by the engine.  The CLI maps the
// subtree an exception belongs to onto its exit code.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- numerical kernel errors ------------------------------------------

class InvalidInput : public Error {
public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

class DegenerateDenominator : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  using Error::Error;
};

class SingularVielbein : public Error {
public:
  using Error::Error;
};

class InvalidFrame : public Error {
public:
  using Error::Error;
};

class SymmetrizationFailed : public Error {
public:
  using Error::Error;
};

class InvalidAnsatz : public Error {
public:
  using Error::Error;
};

// ---- expression language errors ---------------------------------------

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& msg, std::size_t offset)
      : Error(msg), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class UnknownSymbol : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

// ---- grid errors --------------------------------------------------------

class InsufficientGhost : public Error {
public:
  using Error::Error;
};

class PointOffGrid : public Error {
public:
  using Error::Error;
};

// ---- configuration / io errors -----------------------------------------

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class VersionMismatch : public Error {
public:
  using Error::Error;
};

// An internal consistency check failed while running the decomposition
// pipeline.  Carries the name of the check and the grid point where it
// tripped, so the abort message can point at the offending input.
class CheckFailure : public Error {
public:
  CheckFailure(const std::string& check, const std::string& where,
               const std::string& detail)
      : Error("check '" + check + "' failed at " + where + ": " + detail),
        check_(check) {}
  const std::string& check() const noexcept { return check_; }

private:
  std::string check_;
};

} // namespace bimdecomp
