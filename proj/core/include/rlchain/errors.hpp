#pragma once

#include <string>
#include <variant>

namespace rlchain {

enum class ErrorCode {
  OK,
  PERMISSION_DENIED,
  ALREADY_EXISTS,
  NOT_FOUND,
  INVALID_BOM,
  INVALID_TRANSITION,
  MISSING_RECORD,
  TOO_LARGE,
  INTEGRITY_FAILURE,
  NO_PROGRESS,
  OUT_OF_RANGE,
  SERIALIZATION_ERROR,
  BAD_SIGNATURE,
  BAD_NONCE,
  NOT_YOUR_TURN,
  INVALID_ARGUMENT,
};

inline const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OK: return "OK";
    case ErrorCode::PERMISSION_DENIED: return "PERMISSION_DENIED";
    case ErrorCode::ALREADY_EXISTS: return "ALREADY_EXISTS";
    case ErrorCode::NOT_FOUND: return "NOT_FOUND";
    case ErrorCode::INVALID_BOM: return "INVALID_BOM";
    case ErrorCode::INVALID_TRANSITION: return "INVALID_TRANSITION";
    case ErrorCode::MISSING_RECORD: return "MISSING_RECORD";
    case ErrorCode::TOO_LARGE: return "TOO_LARGE";
    case ErrorCode::INTEGRITY_FAILURE: return "INTEGRITY_FAILURE";
    case ErrorCode::NO_PROGRESS: return "NO_PROGRESS";
    case ErrorCode::OUT_OF_RANGE: return "OUT_OF_RANGE";
    case ErrorCode::SERIALIZATION_ERROR: return "SERIALIZATION_ERROR";
    case ErrorCode::BAD_SIGNATURE: return "BAD_SIGNATURE";
    case ErrorCode::BAD_NONCE: return "BAD_NONCE";
    case ErrorCode::NOT_YOUR_TURN: return "NOT_YOUR_TURN";
    case ErrorCode::INVALID_ARGUMENT: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

struct Error {
  ErrorCode code = ErrorCode::OK;
  std::string detail;
};

// Minimal expected-style result; holds either a value or an Error.
template <typename T>
class Result {
 public:
  Result(T value) : value_(std::move(value)) {}
  Result(Error err) : value_(std::move(err)) {}
  Result(ErrorCode code, std::string detail = {}) : value_(Error{code, std::move(detail)}) {}

  bool ok() const { return std::holds_alternative<T>(value_); }
  explicit operator bool() const { return ok(); }

  T& value() { return std::get<T>(value_); }
  const T& value() const { return std::get<T>(value_); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }
  T& operator*() { return value(); }
  const T& operator*() const { return value(); }

  const Error& error() const { return std::get<Error>(value_); }
  ErrorCode code() const { return ok() ? ErrorCode::OK : error().code; }

 private:
  std::variant<T, Error> value_;
};

struct Unit {};

using Status = Result<Unit>;

inline Status ok_status() { return Status(Unit{}); }

}  // namespace rlchain
