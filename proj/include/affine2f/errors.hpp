#pragma once

#include <stdexcept>
#include <string>

namespace affine2f {

// Bad or unparsable user input (config files, CLI flags, parameter domains).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model hypothesis required by the requested computation does not hold.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base class for numerical failures on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Normal-equation matrix too ill-conditioned to solve reliably.
class SingularGram : public NumericalError {
 public:
  SingularGram(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Transformed estimate outside the domain of the inverse map (d >= 1 or zeta >= 1).
class OutOfDomain : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Near-singular 2x2 system in the diffusion-coefficient statistics.
class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Extracted e^{bT} Y_T was not positive.
class NonPositiveVY : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Path too short for the requested statistic.
class InsufficientData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace affine2f
