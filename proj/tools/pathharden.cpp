//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
// Command-line front end: check-syntax, classify, harden, run, check,
// attack. JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success,
// 1 operational failure (divergence, strict-mode violation, attack
// consistency FAIL), 2 usage or parse error.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "pathharden/attack.hpp"
#include "pathharden/classifier.hpp"
#include "pathharden/equivalence.hpp"
#include "pathharden/interpreter.hpp"
#include "pathharden/json_io.hpp"
#include "pathharden/parser.hpp"
#include "pathharden/printer.hpp"
#include "pathharden/transformer.hpp"
#include "pathharden/validator.hpp"

namespace {

using namespace pathharden;

constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitOperational = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed for " + path);
}

Program load_file(const std::string& path) {
  return load_program(read_file(path));
}

bool is_hex_digit(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
         (c >= 'A' && c <= 'F');
}

unsigned hex_nibble(char c) {
  if (c >= '0' && c <= '9') return unsigned(c - '0');
  if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
  return unsigned(c - 'A' + 10);
}

// Same escape syntax as string literals; quotes around the whole value are
// optional on the command line.
Bytes unescape_value(std::string text) {
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    text = text.substr(1, text.size() - 2);
  }
  Bytes out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '\\' && i + 1 < text.size()) {
      const char next = text[i + 1];
      if (next == 'x') {
        if (i + 3 >= text.size() || !is_hex_digit(text[i + 2]) ||
            !is_hex_digit(text[i + 3])) {
          throw UsageError("bad \\x escape in input value");
        }
        out.push_back(char(hex_nibble(text[i + 2]) * 16 + hex_nibble(text[i + 3])));
        i += 4;
        continue;
      }
      if (next == '"' || next == '\\') {
        out.push_back(next);
        i += 2;
        continue;
      }
      throw UsageError(std::string("unknown escape \\") + next +
                       " in input value");
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(what + " must be a decimal integer: '" + text + "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end != text.c_str() + text.size()) {
    throw UsageError(what + " is out of range: '" + text + "'");
  }
  return v;
}

// --seed wins, then PATHHARDEN_SEED, then nothing.
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("PATHHARDEN_SEED")) {
    return parse_u64(env, "PATHHARDEN_SEED");
  }
  return std::nullopt;
}

std::uint64_t nondeterministic_seed() {
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) ^ rd();
}

struct ClassifierFlags {
  double min_entropy_bits = 64.0;
  std::size_t min_needle_len = 8;
  double charset_bits = 8.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--min-entropy-bits", min_entropy_bits,
                    "Guessing-work threshold for hardenable comparands")
        ->capture_default_str();
    cmd->add_option("--min-needle-len", min_needle_len,
                    "Minimum substring needle length in bytes")
        ->capture_default_str();
    cmd->add_option("--charset-bits-per-byte", charset_bits,
                    "Entropy credited per byte of a string literal")
        ->capture_default_str();
  }

  ClassifierPolicy policy() const {
    ClassifierPolicy p;
    p.min_entropy_bits = min_entropy_bits;
    p.min_needle_len = min_needle_len;
    p.charset_bits_per_byte = charset_bits;
    if (auto bad = check_policy(p)) throw UsageError(*bad);
    return p;
  }
};

void emit(const nlohmann::json& doc) { std::cout << doc.dump(2) << "\n"; }

int cmd_check_syntax(const std::string& path, bool json_out) {
  Program p = load_file(path);
  if (json_out) {
    emit(nlohmann::json{{"format_version", kFormatVersion}, {"ok", true}});
  } else {
    std::cout << "ok: " << p.inputs.size() << " input(s), valid program\n";
  }
  return kExitOk;
}

int cmd_classify(const std::string& path, const ClassifierFlags& flags,
                 bool json_out) {
  Program p = load_file(path);
  const auto sites = scan_program(p, flags.policy());
  if (json_out) {
    emit(to_json(sites));
    return kExitOk;
  }
  if (sites.empty()) {
    std::cout << "no conditionals\n";
    return kExitOk;
  }
  for (const Classification& c : sites) {
    std::cout << "line " << c.site.line << ", col " << c.site.column << ": "
              << site_kind_name(c.kind)
              << (c.hardenable ? " (hardenable)" : " (not hardenable)")
              << ", guess cost " << c.guess_cost_bits << " bits";
    if (!c.reason.empty()) std::cout << " [" << c.reason << "]";
    std::cout << "\n    " << c.detail << "\n";
  }
  return kExitOk;
}

struct HardenFlags {
  std::string out_path;
  std::string report_path;
  std::string salt_hex;
  bool no_salt = false;
  bool best_effort = false;
  unsigned truncate_bits = 256;
};

int cmd_harden(const std::string& path, const HardenFlags& hf,
               const ClassifierFlags& cf,
               const std::optional<std::uint64_t>& seed_flag, bool json_out) {
  Program p = load_file(path);

  HardeningPolicy policy;
  policy.classifier = cf.policy();
  policy.mode = hf.best_effort ? HardeningMode::BestEffort : HardeningMode::Strict;
  policy.hash.truncate_bits = hf.truncate_bits;
  if (!hf.salt_hex.empty()) {
    try {
      policy.hash.salt = from_hex(hf.salt_hex);
    } catch (const Error& e) {
      throw UsageError(std::string("--salt: ") + e.what());
    }
  } else if (!hf.no_salt) {
    policy.random_salt = true;
  }
  if (auto bad = check_config(policy.hash); bad && !policy.random_salt) {
    throw UsageError(*bad);
  }
  if (policy.hash.truncate_bits % 8 != 0 || policy.hash.truncate_bits < 8 ||
      policy.hash.truncate_bits > 256) {
    throw UsageError("--truncate-bits must be a multiple of 8 in [8, 256]");
  }

  const auto seed = resolve_seed(seed_flag);
  Rng salt_rng(seed ? *seed : nondeterministic_seed());

  HardeningResult result;
  try {
    result = harden_program(p, policy, &salt_rng);
  } catch (const StrictModeViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOperational;
  }

  write_file(hf.out_path, pretty_print(result.program));
  if (!hf.report_path.empty()) {
    write_file(hf.report_path, to_json(result.report).dump(2) + "\n");
  }
  if (json_out) {
    emit(to_json(result.report));
  } else {
    std::cout << explain_report(result.report);
    std::cout << "wrote " << hf.out_path << "\n";
  }
  return kExitOk;
}

int cmd_run(const std::string& path, const std::vector<std::string>& input_flags,
            bool json_out) {
  Program p = load_file(path);
  InputBinding binding;
  for (const std::string& flag : input_flags) {
    const std::size_t eq = flag.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--input expects name=value, got '" + flag + "'");
    }
    const std::string name = flag.substr(0, eq);
    const std::string text = flag.substr(eq + 1);
    const InputDecl* decl = nullptr;
    for (const InputDecl& d : p.inputs) {
      if (d.name == name) decl = &d;
    }
    if (!decl) throw UsageError("program declares no input named '" + name + "'");
    if (decl->type == ValueType::Int) {
      binding[name] = parse_u64(text, "--input " + name);
    } else {
      binding[name] = unescape_value(text);
    }
  }
  EvalResult result;
  try {
    result = evaluate(p, binding);
  } catch (const TypeFault& e) {
    throw UsageError(e.what());
  }
  if (json_out) {
    emit(to_json(result));
  } else {
    std::cout << verdict_name(result.verdict) << "\n";
    std::cout << "steps: " << result.cost.steps
              << ", hash invocations: " << result.cost.hash_invocations
              << ", bytes hashed: " << result.cost.bytes_hashed << "\n";
  }
  return kExitOk;
}

struct CheckFlags {
  std::uint64_t trials = 10000;
  std::size_t min_len = 0;
  std::size_t max_len = 64;
  double embed_fraction = 0.01;
  bool no_embed = false;
};

// Collects every literal of the program as plant material so random testing
// actually reaches the branches guarded by them.
void collect_plants(const Program& p, InputGeneratorSpec& gen) {
  std::vector<const Expr*> stack;
  const std::function<void(const Block&)> walk_block = [&](const Block& b) {
    const std::function<void(const Expr&)> walk_expr = [&](const Expr& e) {
      std::visit(Overloaded{
                     [&](const IntLit& n) {
                       if (std::find(gen.embed_ints.begin(), gen.embed_ints.end(),
                                     n.value) == gen.embed_ints.end()) {
                         gen.embed_ints.push_back(n.value);
                       }
                     },
                     [&](const StrLit& n) {
                       if (!n.value.empty() &&
                           std::find(gen.embed_strings.begin(),
                                     gen.embed_strings.end(),
                                     n.value) == gen.embed_strings.end()) {
                         gen.embed_strings.push_back(n.value);
                       }
                     },
                     [&](const Cmp& n) {
                       walk_expr(*n.lhs);
                       walk_expr(*n.rhs);
                     },
                     [&](const LogicalAnd& n) {
                       walk_expr(*n.lhs);
                       walk_expr(*n.rhs);
                     },
                     [&](const LogicalOr& n) {
                       walk_expr(*n.lhs);
                       walk_expr(*n.rhs);
                     },
                     [&](const LogicalNot& n) { walk_expr(*n.operand); },
                     [&](const ContainsCall& n) {
                       walk_expr(*n.haystack);
                       walk_expr(*n.needle);
                     },
                     [&](const LengthCall& n) { walk_expr(*n.arg); },
                     [&](const SubstringCall& n) {
                       walk_expr(*n.str);
                       walk_expr(*n.start);
                       walk_expr(*n.len);
                     },
                     [&](const HashEqCall& n) { walk_expr(*n.value); },
                     [&](const HashContainsCall& n) { walk_expr(*n.haystack); },
                     [](const VarRef&) {},
                 },
                 e.node);
    };
    for (const StmtPtr& stmt : b) {
      std::visit(Overloaded{
                     [&](const LetStmt& s) { walk_expr(*s.value); },
                     [&](const IfStmt& s) {
                       walk_expr(*s.cond);
                       walk_block(s.then_block);
                       if (s.else_block) walk_block(*s.else_block);
                     },
                     [](const auto&) {},
                 },
                 stmt->node);
    }
  };
  walk_block(p.body);
}

int cmd_check(const std::string& path_p, const std::string& path_q,
              const CheckFlags& flags,
              const std::optional<std::uint64_t>& seed_flag, bool json_out) {
  Program p = load_file(path_p);
  Program q = load_file(path_q);

  InputGeneratorSpec gen;
  gen.default_min_len = flags.min_len;
  gen.default_max_len = flags.max_len;
  if (!flags.no_embed) {
    gen.embed_fraction = flags.embed_fraction;
    collect_plants(p, gen);
  }

  const std::uint64_t seed = resolve_seed(seed_flag).value_or(0);
  DivergenceReport report;
  try {
    report = equivalence_check(p, q, gen, flags.trials, seed);
  } catch (const GeneratorMismatch& e) {
    throw UsageError(e.what());
  }

  if (json_out) {
    emit(to_json(report));
  } else {
    std::cout << "trials: " << report.trials
              << ", divergences: " << report.divergences.size() << "\n";
    auto show = [](const char* name, const std::optional<RatioStats>& r) {
      if (!r) {
        std::cout << name << " ratio: n/a\n";
        return;
      }
      std::cout << name << " ratio: min " << r->min << ", median " << r->median
                << ", max " << r->max << "\n";
    };
    show("steps", report.steps_ratio);
    show("hash invocations", report.hash_invocations_ratio);
    show("bytes hashed", report.bytes_hashed_ratio);
    for (std::size_t i = 0; i < report.divergences.size() && i < 5; ++i) {
      const Divergence& d = report.divergences[i];
      std::cout << "divergence at trial " << d.trial << ": "
                << verdict_name(d.verdict_p) << " vs "
                << verdict_name(d.verdict_q) << "\n";
    }
  }
  return report.divergences.empty() ? kExitOk : kExitOperational;
}

struct AttackFlags {
  std::uint64_t budget = 1000000;
  std::string report_path;
};

int cmd_attack(const std::string& path, const AttackFlags& af,
               const ClassifierFlags& cf,
               const std::optional<std::uint64_t>& seed_flag, bool json_out) {
  Program p = load_file(path);
  const auto sites = scan_program(p, cf.policy());

  AttackBudgets budgets;
  budgets.dictionary = af.budget;
  budgets.exhaustive = af.budget;
  budgets.seed = resolve_seed(seed_flag).value_or(0);
  const AttackReport report = attack_report(p, sites, budgets);

  if (!af.report_path.empty()) {
    write_file(af.report_path, to_json(report).dump(2) + "\n");
  }
  if (json_out) {
    emit(to_json(report));
  } else {
    for (const SiteAttack& sa : report.sites) {
      const Classification& c = sa.classification;
      std::cout << "line " << c.site.line << ", col " << c.site.column << ": "
                << site_kind_name(c.kind);
      if (c.already_hardened) std::cout << " (already hardened)";
      if (!sa.attacked) {
        std::cout << " (not attacked: " << sa.note << ")\n";
        continue;
      }
      std::cout << (sa.consistent ? " consistent" : " INCONSISTENT") << "\n";
      for (const AttackOutcome& o : sa.outcomes) {
        std::cout << "    " << attacker_name(o.attacker) << ": "
                  << (o.success ? "cracked" : "resisted") << " after "
                  << o.queries << " queries\n";
      }
    }
    std::cout << "verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
  }
  return report.pass ? kExitOk : kExitOperational;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rewrites constant-comparing conditionals into precomputed "
               "digest comparisons, and tests the result"};
  app.require_subcommand(0, 1);

  bool show_version = false;
  app.add_flag("--version", show_version, "Print tool and format versions");

  std::optional<std::uint64_t> seed_flag;
  bool json_out = false;

  auto add_common = [&](CLI::App* cmd, bool with_seed) {
    cmd->add_flag("--json", json_out, "Emit a JSON document on stdout");
    if (with_seed) {
      cmd->add_option("--seed", seed_flag,
                      "Seed for reproducible randomness (falls back to "
                      "PATHHARDEN_SEED)");
    }
  };

  std::string file_a, file_b;
  ClassifierFlags cf;
  HardenFlags hf;
  CheckFlags chf;
  AttackFlags af;
  std::vector<std::string> input_flags;

  CLI::App* sc_syntax = app.add_subcommand("check-syntax", "Parse and validate a program");
  sc_syntax->add_option("file", file_a, "Program file")->required();
  add_common(sc_syntax, false);

  CLI::App* sc_classify = app.add_subcommand("classify", "Classify every conditional site");
  sc_classify->add_option("file", file_a, "Program file")->required();
  cf.attach(sc_classify);
  add_common(sc_classify, false);

  CLI::App* sc_harden = app.add_subcommand("harden", "Rewrite hardenable conditionals to digest comparisons");
  sc_harden->add_option("file", file_a, "Program file")->required();
  sc_harden->add_option("-o,--output", hf.out_path, "Output program file")->required();
  auto* salt_opt = sc_harden->add_option("--salt", hf.salt_hex, "Pinned salt as lowercase hex");
  auto* no_salt_opt = sc_harden->add_flag("--no-salt", hf.no_salt, "Hash without a salt");
  salt_opt->excludes(no_salt_opt);
  sc_harden->add_option("--truncate-bits", hf.truncate_bits, "Digest width in bits (multiple of 8)")
      ->capture_default_str();
  auto* strict_flag = sc_harden->add_flag("--strict", "Fail unless every site is hardenable (default)");
  auto* best_flag = sc_harden->add_flag("--best-effort", hf.best_effort, "Harden what qualifies, keep the rest");
  strict_flag->excludes(best_flag);
  sc_harden->add_option("--report", hf.report_path, "Write the JSON report to this file");
  cf.attach(sc_harden);
  add_common(sc_harden, true);

  CLI::App* sc_run = app.add_subcommand("run", "Evaluate a program on given inputs");
  sc_run->add_option("file", file_a, "Program file")->required();
  sc_run->add_option("--input", input_flags, "Input binding name=value (repeatable)");
  add_common(sc_run, false);

  CLI::App* sc_check = app.add_subcommand("check", "Compare two programs on seeded random inputs");
  sc_check->add_option("original", file_a, "Baseline program")->required();
  sc_check->add_option("candidate", file_b, "Program to compare against it")->required();
  sc_check->add_option("--trials", chf.trials, "Number of random trials")->capture_default_str();
  sc_check->add_option("--min-len", chf.min_len, "Minimum generated string length")->capture_default_str();
  sc_check->add_option("--max-len", chf.max_len, "Maximum generated string length")->capture_default_str();
  sc_check->add_option("--embed-fraction", chf.embed_fraction,
                       "Fraction of trials that plant a program literal into the inputs")
      ->capture_default_str();
  sc_check->add_flag("--no-embed", chf.no_embed, "Disable literal planting");
  add_common(sc_check, true);

  CLI::App* sc_attack = app.add_subcommand("attack", "Attack every conditional and check the classifier's verdicts");
  sc_attack->add_option("file", file_a, "Program file")->required();
  sc_attack->add_option("--budget", af.budget, "Query budget per attack")->capture_default_str();
  sc_attack->add_option("--report", af.report_path, "Write the JSON report to this file");
  cf.attach(sc_attack);
  add_common(sc_attack, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (show_version) {
    std::cout << "pathharden " << kToolVersion << " (format "
              << pathharden::kFormatVersion << ")\n";
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (sc_syntax->parsed()) return cmd_check_syntax(file_a, json_out);
    if (sc_classify->parsed()) return cmd_classify(file_a, cf, json_out);
    if (sc_harden->parsed()) return cmd_harden(file_a, hf, cf, seed_flag, json_out);
    if (sc_run->parsed()) return cmd_run(file_a, input_flags, json_out);
    if (sc_check->parsed()) return cmd_check(file_a, file_b, chf, seed_flag, json_out);
    if (sc_attack->parsed()) return cmd_attack(file_a, af, cf, seed_flag, json_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationFailure& e) {
    std::cerr << "validation error:\n";
    for (const ValidationError& err : e.errors()) {
      std::cerr << "  line " << err.span.line << ", col " << err.span.column
                << ": " << err.message << " [" << validation_code_name(err.code)
                << "]\n";
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOperational;
  }
  return kExitUsage;
}
