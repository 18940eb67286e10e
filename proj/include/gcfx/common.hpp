#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace gcfx {

using Mat = Eigen::MatrixXd;

enum class ErrorKind {
  format,      // malformed input file
  validation,  // structurally invalid data
  config,      // incompatible or missing configuration
  numeric,     // non-finite values where finite ones are required
  argument,    // bad argument to an operation
  io           // filesystem failure
};

/// All library errors carry the module that raised them so the CLI can
/// attribute failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message),
        kind_(kind),
        module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::format: return "format";
    case ErrorKind::validation: return "validation";
    case ErrorKind::config: return "config";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::argument: return "argument";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace gcfx
