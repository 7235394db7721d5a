#pragma once

#include <stdexcept>
#include <string>

namespace reluk {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad rational syntax, shape mismatch, unknown JSON field.
/// The message is prefixed with the path of the offending field when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  SingularSystem() : Error("singular system") {}
};

class ExpansionTooLarge : public Error {
 public:
  using Error::Error;
};

class DegreeExceedsBudget : public Error {
 public:
  using Error::Error;
};

class NotEmbeddable : public Error {
 public:
  using Error::Error;
};

/// Raised by the certifier when a network does not have a structure it can
/// reduce symbolically.
class NotRecognized : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace reluk
