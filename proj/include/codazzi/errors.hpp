#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace codazzi {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset)
      : Error(std::move(message)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Identifier that is neither a declared coordinate nor a known function.
class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Evaluation left the domain of a contained function (log of a non-positive
/// value, division by zero, ...). The message names the offending subexpression
/// and the point.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// Sample point rejected at load time (metric not positive definite there,
/// or too close to a chart singularity).
class SingularPointError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class UnknownFieldError : public Error {
 public:
  using Error::Error;
};

class NonsymmetricFieldError : public Error {
 public:
  using Error::Error;
};

/// Two eigenvalues sit too close to the clustering threshold for the partition
/// to be trustworthy; the caller must pick a different cluster tolerance.
class ClusterAmbiguityError : public Error {
 public:
  using Error::Error;
};

/// Manifest validation failure. `path` is the key path inside the manifest.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace codazzi
