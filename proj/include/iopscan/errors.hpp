#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace iopscan {

// Exit-code families used by the CLI: config 1, data 2, gate 3.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

/// A record violates the ingestion schema. Carries the 1-based line number
/// and the offending field so diagnostics can point at the input.
class SchemaError : public DataError {
 public:
  SchemaError(std::size_t line, std::string field, const std::string& what,
              const std::string& source = {})
      : DataError((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) +
                  ": field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)),
        detail_(what) {}

  /// Same error, prefixed with the file it came from.
  SchemaError in_file(const std::string& source) const {
    return SchemaError(line_, field_, detail_, source);
  }

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
  std::string detail_;
};

/// Input has no usable content (no tokens, no biterms, empty class...).
class DegenerateError : public DataError {
 public:
  using DataError::DataError;
};

class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

/// Required annotations are missing for some items.
class CoverageError : public DataError {
 public:
  CoverageError(const std::string& what, std::vector<std::string> missing)
      : DataError(what), missing_(std::move(missing)) {}

  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

class UndefinedTestError : public DataError {
 public:
  using DataError::DataError;
};

/// A pipeline stage cannot run until an upstream artifact or a human
/// annotation pass exists.
class GateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iopscan
