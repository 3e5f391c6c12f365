#ifndef ISOCALC_CORE_ERRORS_HPP_
#define ISOCALC_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace isocalc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of the function or operation (ln 0, x < 2 for
// backward derivatives, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The working precision cannot represent the requested increment.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A summation hit max_terms before its stopping rule was satisfied. The
// partial result is kept as text so the exception stays copyable.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::string best_partial, long long terms_used)
      : Error(what), best_partial_(std::move(best_partial)), terms_used_(terms_used) {}

  const std::string& best_partial() const { return best_partial_; }
  long long terms_used() const { return terms_used_; }

 private:
  std::string best_partial_;
  long long terms_used_;
};

class UnreliableExtrapolationError : public Error {
 public:
  using Error::Error;
};

// Two independent evaluation paths disagree beyond their combined bounds.
class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, std::string first, std::string second)
      : Error(what), first_(std::move(first)), second_(std::move(second)) {}

  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }

 private:
  std::string first_;
  std::string second_;
};

class CapError : public Error {
 public:
  using Error::Error;
};

}  // namespace isocalc

#endif  // ISOCALC_CORE_ERRORS_HPP_
