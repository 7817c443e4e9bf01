#pragma once

// Differential fuzzing of the checker against the simulator: programs the
// checker accepts must never hit a runtime type error.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "edis/ast.hpp"
#include "edis/backend.hpp"
#include "edis/checker.hpp"

namespace edis {

struct FuzzConfig {
  std::uint64_t iterations = 1000;
  std::uint64_t seed = 42;
  std::size_t max_len = 20;
  bool strict = false;
};

/// How one generated program fared.
enum class Verdict {
  Rejected,
  Clean,
  WrongType,
  ParseError,   // INCR / INCRBYFLOAT on a non-numeric string
  DecodeFailure,
  OtherError,   // overflow, NaN/Inf, anything else the server refuses
};

std::string_view verdict_name(Verdict v);

/// True for outcomes that contradict the checker's guarantee in the given
/// mode.
bool is_violation(Verdict v, bool strict);

struct Classified {
  Verdict verdict = Verdict::Rejected;
  std::string detail;
};

/// Checks `p` and, if accepted, runs it on a fresh simulator.
Classified classify(const Program& p, bool strict);

struct FuzzStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t wrongtype = 0;
  std::uint64_t parse_errors = 0;
  std::uint64_t decode_failures = 0;
  std::uint64_t other_errors = 0;
  std::uint64_t commands_executed = 0;

  friend bool operator==(const FuzzStats&, const FuzzStats&) = default;
};

struct Counterexample {
  std::uint64_t iteration = 0;
  Verdict verdict = Verdict::Clean;
  std::string detail;
  Program original;
  Program minimized;
};

struct FuzzReport {
  FuzzStats stats;
  std::optional<Counterexample> counterexample;  // the first violation

  bool ok() const { return !counterexample; }
};

/// The fixed pool of record shapes programs draw from.
const std::vector<RecordDecl>& fuzz_record_pool();

/// One program, built command by command against the evolving dictionary.
Program generate_program(std::mt19937_64& rng, const FuzzConfig& cfg);

/// Greedily drops commands and records while `still_fails` holds.
Program shrink(Program p, const std::function<bool(const Program&)>& still_fails);

FuzzReport run_fuzz(const FuzzConfig& cfg);

}  // namespace edis
