#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qtwist {

/// Base class for every error raised by the engine.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands live in incompatible spaces (order, legs, dimensions, algebra).
class shape_error : public error {
public:
  using error::error;
};

/// A word refers to a generator that does not exist.
class malformed_word_error : public error {
public:
  using error::error;
};

/// A series was asked to exponentiate something without positive valuation.
class non_truncatable_error : public error {
public:
  using error::error;
};

class singular_matrix_error : public error {
public:
  using error::error;
};

/// The algebra declaration is unusable (degenerate r, bad dimensions, ...).
class spec_error : public error {
public:
  using error::error;
};

/// No admissible xi exists; carries a central element of L inside V.
class no_valid_xi_error : public error {
public:
  no_valid_xi_error(const std::string& what, std::vector<std::string> witness)
      : error(what), witness_(std::move(witness)) {}

  const std::vector<std::string>& witness() const noexcept { return witness_; }

private:
  std::vector<std::string> witness_;
};

class unsupported_preset_error : public error {
public:
  using error::error;
};

/// Spec-file problem; `field()` is a JSON-path-like location, `line()` is
/// 1-based or 0 when unknown.
class parse_error : public error {
public:
  parse_error(const std::string& field, std::size_t line, const std::string& msg)
      : error(compose(field, line, msg)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

private:
  static std::string compose(const std::string& field, std::size_t line,
                             const std::string& msg) {
    std::string s;
    if (line > 0) s += "line " + std::to_string(line) + ": ";
    if (!field.empty()) s += "field '" + field + "': ";
    return s + msg;
  }

  std::string field_;
  std::size_t line_;
};

}  // namespace qtwist
