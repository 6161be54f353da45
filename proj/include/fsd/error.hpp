#pragma once

#include <stdexcept>
#include <string>

namespace fsd {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Validation = 1,
  MissingResource = 2,
  Invariant = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::Validation, what) {}
};

class MissingResourceError : public Error {
 public:
  explicit MissingResourceError(const std::string& what)
      : Error(ErrorKind::MissingResource, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ErrorKind::Invariant, what) {}
};

}  // namespace fsd

#define FSD_CHECK(cond, msg)                                              \
  do {                                                                    \
    if (!(cond)) throw ::fsd::InvariantError(std::string("invariant: ") + \
                                             (msg));                      \
  } while (0)
