#pragma once

#include <stdexcept>
#include <string>

namespace hlab {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
  Input,      // malformed or rejected input, violated precondition
  Tolerance,  // a numerical check exceeded its bound
  Internal,   // the library contradicted one of its own guarantees
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InputError : Error {
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

/// Grid too coarse to represent the requested band without aliasing.
struct AliasingError : Error {
  explicit AliasingError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

struct DegenerateFieldError : Error {
  explicit DegenerateFieldError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

/// Output truncation discarded more than the configured bound.
struct TruncationError : Error {
  explicit TruncationError(const std::string& what) : Error(ErrorKind::Tolerance, what) {}
};

struct BlowUpError : Error {
  explicit BlowUpError(const std::string& what) : Error(ErrorKind::Tolerance, what) {}
};

struct InternalInconsistency : Error {
  explicit InternalInconsistency(const std::string& what) : Error(ErrorKind::Internal, what) {}
};

}  // namespace hlab
