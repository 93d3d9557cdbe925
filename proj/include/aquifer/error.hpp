#pragma once

#include <stdexcept>
#include <string>

namespace aquifer {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or inconsistent mesh connectivity. `line()` is the
/// 1-based line of the offending record, or 0 when not tied to a line.
class MeshError : public Error {
 public:
  MeshError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Factorization failure, refused step, or non-finite solution.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Unwritable output directory or failed file write.
class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what, int line = 0)
      : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
              (key.empty() ? what : key + ": " + what)),
        key_(key),
        line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

}  // namespace aquifer
