//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <string_view>

#include "pathharden/ast.hpp"

namespace pathharden {

// Syntax only; run validate() afterwards for scope and type checks.
// Throws ParseError with the span of the first failure.
Program parse(std::string_view source);

// parse() followed by validate(); throws ValidationFailure if the program
// breaks any static rule.
Program load_program(std::string_view source);

}  // namespace pathharden
