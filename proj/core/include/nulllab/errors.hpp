#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nulllab {

// Two error families, mapped to stable CLI exit codes:
// ValidationError -> 2 (bad input / bad configuration),
// NumericError    -> 3 (runtime numerical failure).

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class EmptySampleError : public ValidationError {
 public:
  EmptySampleError() : ValidationError("EmptySample: at least one observation is required") {}
};

class DegenerateSampleSizeError : public ValidationError {
 public:
  explicit DegenerateSampleSizeError(std::size_t n)
      : ValidationError("DegenerateSampleSize: n = " + std::to_string(n) +
                        " but the frequency calibration needs n >= 2") {}
};

class MissingDeltaError : public ValidationError {
 public:
  MissingDeltaError()
      : ValidationError("MissingDelta: the bias-rate bound needs delta_n in the mixture spec") {}
};

class ZeroFrequencyError : public ValidationError {
 public:
  explicit ZeroFrequencyError(const std::string& ctx)
      : ValidationError("ZeroFrequency: " + ctx) {}
};

class ZeroModulusError : public NumericError {
 public:
  ZeroModulusError() : NumericError("ZeroModulus: |g(t)| = 0, functional undefined") {}
};

class OverflowError : public NumericError {
 public:
  explicit OverflowError(const std::string& ctx, std::size_t index = kNoIndex)
      : NumericError(index == kNoIndex
                         ? "Overflow: " + ctx
                         : "Overflow: " + ctx + " (sample index " + std::to_string(index) + ")"),
        index_(index) {}

  static constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class QuadratureError : public NumericError {
 public:
  explicit QuadratureError(const std::string& ctx)
      : NumericError("QuadratureFailure: " + ctx) {}
};

}  // namespace nulllab
