#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dnc {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sizes of two objects that must agree do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid argument values (infeasible degree sequence, probability out of range, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A configured cap (variables, qubits, boundary size) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDegreeError : public Error {
 public:
  using Error::Error;
};

class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A declared result disagrees with an independent re-evaluation.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// The external MaxSAT process was missing, failed, or produced unparseable output.
class ExternalSolverError : public Error {
 public:
  ExternalSolverError(const std::string& what, std::string raw_output)
      : Error(what), raw_output_(std::move(raw_output)) {}

  const std::string& raw_output() const noexcept { return raw_output_; }

 private:
  std::string raw_output_;
};

// Failure inside one named step of the classical pipeline.
class PipelineStepError : public Error {
 public:
  PipelineStepError(std::string step, const std::string& what)
      : Error("step " + step + ": " + what), step_(std::move(step)) {}

  const std::string& step() const noexcept { return step_; }

 private:
  std::string step_;
};

}  // namespace dnc
