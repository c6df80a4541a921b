#pragma once

#include <stdexcept>
#include <string>

namespace fraudkit {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  Config,              // invalid parameters or configuration documents
  Schema,              // CSV header does not match the expected columns
  Parse,               // malformed numeric cell or JSON document
  LabelDomain,         // a label outside {0,1}
  Data,                // data that violates an operation's precondition
  ShapeMismatch,       // matrix / parameter dimensions disagree
  Numerical,           // divergence, failed calibration, non-finite values
  UnsupportedVersion,  // persisted artifact with an unknown schema_version
  Io,                  // filesystem failures
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace fraudkit
