#pragma once

#include <stdexcept>
#include <string>

namespace mcfair {

/// Failure categories. Each maps to a distinct CLI exit code.
enum class ErrorKind {
  Ingestion,
  Estimation,
  Infeasible,
  IterationLimit,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IngestionError : public Error {
 public:
  explicit IngestionError(const std::string& what)
      : Error(ErrorKind::Ingestion, what) {}
};

class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what)
      : Error(ErrorKind::Estimation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace mcfair
