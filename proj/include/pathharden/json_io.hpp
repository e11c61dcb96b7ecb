//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
// JSON views of every report type. Documents carry a top-level
// format_version; byte strings are rendered with the same escape syntax as
// source literals so they can be pasted back into a program.
#ifndef PATHHARDEN_JSON_IO_HPP
#define PATHHARDEN_JSON_IO_HPP

#include <json.hpp>

#include <vector>

#include "pathharden/attack.hpp"
#include "pathharden/classifier.hpp"
#include "pathharden/equivalence.hpp"
#include "pathharden/interpreter.hpp"
#include "pathharden/transformer.hpp"
#include "pathharden/validator.hpp"

namespace pathharden {

inline constexpr int kFormatVersion = 1;

nlohmann::json value_to_json(const Value& v);
nlohmann::json span_to_json(const SourceSpan& s);

// Document builders; each result carries format_version.
nlohmann::json to_json(const EvalResult& r);
nlohmann::json to_json(const DivergenceReport& r);
nlohmann::json to_json(const std::vector<Classification>& sites);
nlohmann::json to_json(const HardeningReport& r);
nlohmann::json to_json(const AttackReport& r);
nlohmann::json to_json(const std::vector<ValidationError>& errors);

}  // namespace pathharden

#endif  // PATHHARDEN_JSON_IO_HPP
