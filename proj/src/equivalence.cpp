//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#include "pathharden/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "pathharden/common.hpp"

namespace pathharden {

namespace {

RatioStats summarize(std::vector<double>& samples) {
  RatioStats out;
  out.samples = samples.size();
  std::sort(samples.begin(), samples.end());
  out.min = samples.front();
  out.max = samples.back();
  const std::size_t n = samples.size();
  out.median = (n % 2 == 1) ? samples[n / 2]
                            : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
  return out;
}

// Collects q/p per trial. Both zero counts as a ratio of exactly 1; a zero
// denominator with nonzero numerator has no finite ratio and is dropped.
class RatioAccumulator {
 public:
  void add(std::uint64_t p, std::uint64_t q) {
    if (p == 0 && q == 0) {
      samples_.push_back(1.0);
    } else if (p != 0) {
      samples_.push_back(double(q) / double(p));
    }
  }

  std::optional<RatioStats> finish() {
    if (samples_.empty()) return std::nullopt;
    return summarize(samples_);
  }

 private:
  std::vector<double> samples_;
};

}  // namespace

std::map<std::string, InputSpec> resolve_generator(const Program& p,
                                                   const InputGeneratorSpec& gen) {
  std::map<std::string, InputSpec> resolved;
  if (gen.inputs.empty()) {
    for (const InputDecl& decl : p.inputs) {
      InputSpec spec;
      spec.type = decl.type;
      spec.min_len = gen.default_min_len;
      spec.max_len = gen.default_max_len;
      resolved.emplace(decl.name, spec);
    }
    return resolved;
  }
  for (const InputDecl& decl : p.inputs) {
    auto it = gen.inputs.find(decl.name);
    if (it == gen.inputs.end()) {
      throw GeneratorMismatch("generator spec missing input '" + decl.name + "'");
    }
    if (it->second.type != decl.type) {
      throw GeneratorMismatch("generator spec declares '" + decl.name + "' as " +
                              std::string(type_name(it->second.type)) +
                              " but the program declares " +
                              std::string(type_name(decl.type)));
    }
    resolved.emplace(decl.name, it->second);
  }
  for (const auto& [name, spec] : gen.inputs) {
    (void)spec;
    if (!resolved.count(name)) {
      throw GeneratorMismatch("generator spec names undeclared input '" + name +
                              "'");
    }
  }
  return resolved;
}

namespace {

Bytes random_string(const InputSpec& spec, Rng& rng) {
  const std::size_t lo = std::min(spec.min_len, spec.max_len);
  const std::size_t hi = std::max(spec.min_len, spec.max_len);
  const std::size_t len = std::size_t(rng.range(lo, hi));
  return rng.bytes(len);
}

Bytes embed_into(const Bytes& base, const Bytes& secret, Rng& rng) {
  const std::size_t at = std::size_t(rng.below(base.size() + 1));
  Bytes out = base.substr(0, at);
  out += secret;
  out += base.substr(at);
  return out;
}

}  // namespace

InputBinding generate_binding(const Program& p, const InputGeneratorSpec& gen,
                              Rng& rng) {
  const auto resolved = resolve_generator(p, gen);
  const std::uint64_t embed_ppm =
      std::uint64_t(std::llround(std::clamp(gen.embed_fraction, 0.0, 1.0) * 1e6));
  const bool embed_trial = rng.below(1000000) < embed_ppm;

  InputBinding binding;
  for (const InputDecl& decl : p.inputs) {
    const InputSpec& spec = resolved.at(decl.name);
    if (decl.type == ValueType::Int) {
      std::uint64_t v = rng.next_u64();
      if (embed_trial && !gen.embed_ints.empty()) {
        v = gen.embed_ints[std::size_t(rng.below(gen.embed_ints.size()))];
      }
      binding.emplace(decl.name, v);
    } else {
      Bytes v = random_string(spec, rng);
      if (embed_trial && !gen.embed_strings.empty()) {
        const Bytes& secret =
            gen.embed_strings[std::size_t(rng.below(gen.embed_strings.size()))];
        v = embed_into(v, secret, rng);
      }
      binding.emplace(decl.name, std::move(v));
    }
  }
  return binding;
}

DivergenceReport equivalence_check(const Program& p, const Program& q,
                                   const InputGeneratorSpec& gen,
                                   std::uint64_t trials, std::uint64_t seed) {
  if (p.inputs.size() != q.inputs.size()) {
    throw GeneratorMismatch("programs declare different inputs");
  }
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    if (p.inputs[i].name != q.inputs[i].name ||
        p.inputs[i].type != q.inputs[i].type) {
      throw GeneratorMismatch("programs disagree on input '" + p.inputs[i].name +
                              "'");
    }
  }
  resolve_generator(p, gen);

  DivergenceReport report;
  report.trials = trials;
  RatioAccumulator steps, hashes, bytes;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng = Rng::for_index(seed, i);
    InputBinding binding = generate_binding(p, gen, rng);
    const EvalResult rp = evaluate(p, binding);
    const EvalResult rq = evaluate(q, binding);
    if (rp.verdict != rq.verdict) {
      Divergence d;
      d.trial = i;
      d.inputs = binding;
      d.verdict_p = rp.verdict;
      d.verdict_q = rq.verdict;
      report.divergences.push_back(std::move(d));
    }
    steps.add(rp.cost.steps, rq.cost.steps);
    hashes.add(rp.cost.hash_invocations, rq.cost.hash_invocations);
    bytes.add(rp.cost.bytes_hashed, rq.cost.bytes_hashed);
  }
  report.steps_ratio = steps.finish();
  report.hash_invocations_ratio = hashes.finish();
  report.bytes_hashed_ratio = bytes.finish();
  return report;
}

}  // namespace pathharden
