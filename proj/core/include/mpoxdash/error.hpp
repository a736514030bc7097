#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mpoxdash {

// Record-level failure. Ingest counts these and moves on.
class MalformedRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownFormat : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StoreCorrupt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration problem attributable to one key of the config document.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct FieldError {
  std::string field;
  std::string message;

  bool operator==(const FieldError&) const = default;
};

/// Accumulated request validation failures, keyed by wire field name.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<FieldError> errors);
  ValidationError(std::string field, std::string message)
      : ValidationError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

}  // namespace mpoxdash
