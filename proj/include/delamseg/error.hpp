#pragma once

#include <stdexcept>
#include <string>

namespace delamseg {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file contents. The message names the offending row/column.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Inputs violate an operation precondition (e.g. marker above mask).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Too few distinct values to cluster.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// The delamination-boundary reference mask came out empty.
class NoReferenceError : public Error {
 public:
  using Error::Error;
};

/// Wraps a failure with the name of the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace delamseg
