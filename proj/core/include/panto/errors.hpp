#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace panto {

/// Base class of all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A model document could not be parsed or violates the schema.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = -1, std::string location = {})
      : Error(what), line_(line), location_(std::move(location)) {}

  /// 1-based line in the input, or -1 when unknown.
  int line() const { return line_; }
  /// JSON-pointer-ish path of the offending field, empty when unknown.
  const std::string& location() const { return location_; }

 private:
  int line_;
  std::string location_;
};

/// One invariant violation found while validating a model.
struct Violation {
  std::string code;     // stable identifier, e.g. "duplicate-node-id"
  std::string message;  // human readable, names the offending entity
};

/// A model failed validation; carries the full violation list.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(summarize(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& vs);
  std::vector<Violation> violations_;
};

/// The stiffness system is singular or indefinite; names a near-null DoF.
class UnstableError : public Error {
 public:
  UnstableError(const std::string& what, int node_id, int axis)
      : Error(what), node_id_(node_id), axis_(axis) {}

  int node_id() const { return node_id_; }
  /// 0 = x, 1 = y, 2 = z.
  int axis() const { return axis_; }

 private:
  int node_id_;
  int axis_;
};

/// The cable iteration revisited an earlier non-adjacent flag state.
class CableCycleError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (optimizer parameters, CLI flags, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace panto
