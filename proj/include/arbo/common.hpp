#ifndef ARBO_COMMON_HPP
#define ARBO_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arbo {

enum class ErrorKind {
  DomainMismatch,
  SpaceMismatch,
  InvalidAction,
  NotSubrelation,
  NotCompleteDomain,
  NotSaturating,
  StabilizerNotIncluded,
  NotFundamentalDomain,
  NotFreeProduct,
  NotGenerated,
  TagMismatch,
  HypothesisViolation,
  EmptyGeodesic,
  EmptyIntersection,
  CoverageViolation,
  ParseError,
  ValidationError,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

/// Library-wide exception; `witness` carries offending indices when available.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::vector<int> witness = {})
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        witness_(std::move(witness)) {}

  ErrorKind kind() const { return kind_; }
  const std::vector<int>& witness() const { return witness_; }

 private:
  ErrorKind kind_;
  std::vector<int> witness_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string message,
                              std::vector<int> witness = {}) {
  throw Error(kind, std::move(message), std::move(witness));
}

}  // namespace arbo

#endif
