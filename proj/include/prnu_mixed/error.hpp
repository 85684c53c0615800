#pragma once

#include <stdexcept>
#include <string>

namespace prnu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sizes that violate an operation's preconditions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Values that violate a type invariant (non-finite samples, unnormalized
// weights, out-of-range parameters).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Ill-ordered or unparsable resize pipelines.
class PipelineError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated files.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Correlation of inputs that carry no signal, or surfaces too small to score.
class CorrelationError : public Error {
 public:
  using Error::Error;
};

}  // namespace prnu
