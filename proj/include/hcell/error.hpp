#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hcell {

enum class ErrorKind {
  kCapExceeded,
  kDomainMismatch,
  kNotACongruence,
  kInvalidExpr,
  kNotBlockRespecting,
  kNotNormalizing,
  kUnstable,
  kSiteMismatch,
  kSignatureClash,
  kHorizonTooSmall,
  kParseError,
  kInvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kDomainMismatch: return "DomainMismatch";
    case ErrorKind::kNotACongruence: return "NotACongruence";
    case ErrorKind::kInvalidExpr: return "InvalidExpr";
    case ErrorKind::kNotBlockRespecting: return "NotBlockRespecting";
    case ErrorKind::kNotNormalizing: return "NotNormalizing";
    case ErrorKind::kUnstable: return "Unstable";
    case ErrorKind::kSiteMismatch: return "SiteMismatch";
    case ErrorKind::kSignatureClash: return "SignatureClash";
    case ErrorKind::kHorizonTooSmall: return "HorizonTooSmall";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column,
             std::vector<std::string> expected, const std::string& message)
      : Error(ErrorKind::kParseError,
              std::to_string(line) + ":" + std::to_string(column) + ": " +
                  message),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace hcell
