#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcgeom {

// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorCategory {
  Input,      // malformed expressions, spec files, parameters
  Domain,     // evaluation outside the region where the formulas make sense
  Trace,      // a leaf / flow trace had to stop early
  Immersion,  // immersion preconditions (H + kappa > 0) violated
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), category_(category), kind_(std::move(kind)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  ErrorCategory category_;
  std::string kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorCategory::Input, "SyntaxError",
              "at offset " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(std::string name)
      : Error(ErrorCategory::Input, "UnknownIdentifier", "'" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ArityError : public Error {
 public:
  explicit ArityError(const std::string& message) : Error(ErrorCategory::Input, "ArityError", message) {}
};

// Aggregates per-component parse failures of a metric specification.
class CompileError : public Error {
 public:
  explicit CompileError(std::vector<std::string> problems)
      : Error(ErrorCategory::Input, "CompileError", join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }
  std::vector<std::string> problems_;
};

class InputError : public Error {
 public:
  InputError(std::string kind, const std::string& message)
      : Error(ErrorCategory::Input, std::move(kind), message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error(ErrorCategory::Domain, "DomainError", message) {}
  DomainError(std::string kind, const std::string& message)
      : Error(ErrorCategory::Domain, std::move(kind), message) {}
};

class DegenerateMetric : public DomainError {
 public:
  explicit DegenerateMetric(const std::string& where) : DomainError("DegenerateMetric", where) {}
};

class TraceError : public Error {
 public:
  TraceError(std::string kind, const std::string& message)
      : Error(ErrorCategory::Trace, std::move(kind), message) {}
};

class ImmersionError : public Error {
 public:
  ImmersionError(std::string kind, const std::string& message)
      : Error(ErrorCategory::Immersion, std::move(kind), message) {}
};

}  // namespace qcgeom
