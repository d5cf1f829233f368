#pragma once

#include <stdexcept>
#include <string>

namespace skinspec {

// Input that violates a documented contract: malformed files, inconsistent
// dimensions, unknown labels, empty masks, undersized groups.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failures (missing or unwritable files).
class IoError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A well-formed problem the numerics cannot solve, e.g. a singular
// within-class scatter at zero shrinkage.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A train/test split that cannot be used (empty training set, a class
// missing from training). Recorded per split by the evaluator.
class SplitError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

[[noreturn]] void fail_validation(const std::string& what);
[[noreturn]] void fail_io(const std::string& what);

}  // namespace skinspec
