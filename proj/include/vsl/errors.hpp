#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vsl {

/// Bad input: violated precondition, malformed field, mismatched grids.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A linear solve or iteration could not produce a finite answer.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Time stepping produced a non-finite state.
class NumericalBlowup : public NumericalError {
public:
  NumericalBlowup(std::size_t step, double time)
      : NumericalError("non-finite state at step " + std::to_string(step) +
                       " (t = " + std::to_string(time) + ")"),
        step_(step), time_(time) {}

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

private:
  std::size_t step_;
  double time_;
};

/// An identity was evaluated on a field that does not meet its hypotheses
/// (for instance a velocity that is not divergence-free).
class PreconditionViolation : public InvalidArgument {
public:
  PreconditionViolation(const std::string& what, double measured)
      : InvalidArgument(what + " (measured " + std::to_string(measured) + ")"),
        measured_(measured) {}

  double measured() const noexcept { return measured_; }

private:
  double measured_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}
}  // namespace detail

}  // namespace vsl
