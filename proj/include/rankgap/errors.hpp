#pragma once

#include <stdexcept>
#include <string>

namespace rankgap {

// Error categories double as the CLI exit-code contract.
enum class ErrorKind {
  kInternal = 1,
  kConfig = 2,     // usage or configuration problem
  kData = 3,       // malformed or invalid input data (includes tied scores)
  kUndefined = 4,  // metric undefined for the given input (e.g. single class)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

class UndefinedMetricError : public Error {
 public:
  explicit UndefinedMetricError(const std::string& what)
      : Error(ErrorKind::kUndefined, what) {}
};

// Raised by operations that require pairwise-distinct scores.
class TieError : public DataError {
 public:
  TieError(std::size_t first, std::size_t second, double score);

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

}  // namespace rankgap
