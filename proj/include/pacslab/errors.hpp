#ifndef PACSLAB_ERRORS_HPP
#define PACSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pacslab {

/// Base for every error raised by the library. The CLI maps subclasses onto
/// exit codes: validation -> 2, numerical -> 3, I/O -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Precondition on a scalar argument (negative r, order beyond a table, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Base for failures of a numerical method on otherwise valid input.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class TruncationInsufficient : public NumericalFailure {
 public:
  TruncationInsufficient(const std::string& what, double tail_mass)
      : NumericalFailure(what + " (tail mass " + std::to_string(tail_mass) + ")"),
        tail_mass_(tail_mass) {}

  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

/// Conditioning on an outcome of zero probability.
class EmptyBranch : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class OverflowError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class NumericRangeError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> offenders)
      : Error(join(offenders)), offenders_(std::move(offenders)) {}

  const std::vector<std::string>& offenders() const noexcept { return offenders_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid configuration:";
    for (const auto& item : items) out += "\n  " + item;
    return out;
  }

  std::vector<std::string> offenders_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pacslab

#endif  // PACSLAB_ERRORS_HPP
