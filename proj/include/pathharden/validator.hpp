//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <string>
#include <vector>

#include "pathharden/ast.hpp"

namespace pathharden {

enum class ValidationCode {
  DuplicateInput,
  DuplicateBinding,
  UndeclaredVariable,
  TypeMismatch,
  InvalidWindowLength,
  InvalidDigest,
};

std::string_view validation_code_name(ValidationCode code);

struct ValidationError {
  ValidationCode code;
  std::string message;
  SourceSpan span;
};

// Empty result iff every static rule holds: declared-before-use, no input
// shadowing, type correctness, digest and window sanity.
std::vector<ValidationError> validate(const Program& p);

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(std::vector<ValidationError> errors);
  const std::vector<ValidationError>& errors() const { return errors_; }

 private:
  std::vector<ValidationError> errors_;
};

}  // namespace pathharden
