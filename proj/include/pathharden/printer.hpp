//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <string>

#include "pathharden/ast.hpp"

namespace pathharden {

// Canonical text form: one statement per line, 2-space indents, minimal
// parentheses. parse(pretty_print(p)) is structurally identical to p.
std::string pretty_print(const Program& p);

std::string print_expr(const Expr& e);

// Renders bytes as a MiniLang string literal, including the quotes.
std::string format_string_literal(const Bytes& bytes);

}  // namespace pathharden
