//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
// Sampled behavioral comparison of two programs over seeded random inputs,
// with per-counter cost ratio aggregation.
#ifndef PATHHARDEN_EQUIVALENCE_HPP
#define PATHHARDEN_EQUIVALENCE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathharden/ast.hpp"
#include "pathharden/interpreter.hpp"
#include "pathharden/rng.hpp"

namespace pathharden {

// Per-input generation parameters. `type` must match the declaration;
// the length bounds apply to string inputs only.
struct InputSpec {
  ValueType type = ValueType::Int;
  std::size_t min_len = 0;
  std::size_t max_len = 64;
};

// Describes how random trial inputs are drawn. When `inputs` is empty the
// shape is derived from the program declarations using the default length
// bounds. `embed_fraction` of trials splice a value from `embed_strings`
// into each string input and plant a value from `embed_ints` into each int
// input, so that low-probability branches actually get exercised.
struct InputGeneratorSpec {
  std::map<std::string, InputSpec> inputs;
  std::size_t default_min_len = 0;
  std::size_t default_max_len = 64;
  double embed_fraction = 0.0;
  std::vector<Bytes> embed_strings;
  std::vector<std::uint64_t> embed_ints;
};

struct RatioStats {
  std::uint64_t samples = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct Divergence {
  std::uint64_t trial = 0;
  InputBinding inputs;
  Verdict verdict_p = Verdict::Accept;
  Verdict verdict_q = Verdict::Accept;
};

struct DivergenceReport {
  std::uint64_t trials = 0;
  std::vector<Divergence> divergences;
  // Ratio of q's counter to p's counter per trial. Trials where both sides
  // report zero count as ratio 1; trials where only p reports zero are
  // excluded. Empty when every trial was excluded.
  std::optional<RatioStats> steps_ratio;
  std::optional<RatioStats> hash_invocations_ratio;
  std::optional<RatioStats> bytes_hashed_ratio;
};

// Resolves `gen` against the program's declarations. Throws
// GeneratorMismatch when an explicit spec names an undeclared input, omits a
// declared one, or disagrees on type.
std::map<std::string, InputSpec> resolve_generator(const Program& p,
                                                   const InputGeneratorSpec& gen);

// Draws one full input binding. All randomness comes from `rng`; inputs are
// filled in declaration order so the stream is reproducible.
InputBinding generate_binding(const Program& p, const InputGeneratorSpec& gen,
                              Rng& rng);

// Runs both programs on `trials` seeded random inputs and reports every
// verdict mismatch plus aggregate cost ratios. Trial i draws from the
// stream derived from (seed, i), so results are independent of execution
// order.
DivergenceReport equivalence_check(const Program& p, const Program& q,
                                   const InputGeneratorSpec& gen,
                                   std::uint64_t trials, std::uint64_t seed);

}  // namespace pathharden

#endif  // PATHHARDEN_EQUIVALENCE_HPP
