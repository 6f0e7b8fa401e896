#pragma once

#include <stdexcept>
#include <string>

namespace sing {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical failure while evaluating or fitting a map: exponent overflow,
/// failed root bracketing, singular systems that cannot be damped.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The integrand exponent exceeded the clamp threshold.
class FitDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientSamples : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, double gradient_norm)
      : NumericalError(what), gradient_norm_(gradient_norm) {}
  double gradient_norm() const noexcept { return gradient_norm_; }

 private:
  double gradient_norm_;
};

class SingularHessian : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Rethrows the active numerical error with `prefix` prepended to its message,
/// keeping its dynamic type. Must be called from inside a catch block.
[[noreturn]] inline void rethrow_with_context(const std::string& prefix) {
  try {
    throw;
  } catch (const NonConvergence& e) {
    throw NonConvergence(prefix + e.what(), e.gradient_norm());
  } catch (const FitDivergence& e) {
    throw FitDivergence(prefix + e.what());
  } catch (const InsufficientSamples& e) {
    throw InsufficientSamples(prefix + e.what());
  } catch (const SingularHessian& e) {
    throw SingularHessian(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  }
}

}  // namespace sing
