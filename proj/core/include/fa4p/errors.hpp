#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fa4p {

enum class ErrorKind {
  Domain,
  DegenerateLoading,
  DegeneratePosterior,
  LengthMismatch,
  EnumerationLimit,
  Config,
  Data,
  Parse,
  Io,
  TooFewDraws,
};

/// Short machine-readable tag, e.g. "domain" or "parse".
std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. The CLI prints `kind` as the
/// machine-parseable reason code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fa4p
