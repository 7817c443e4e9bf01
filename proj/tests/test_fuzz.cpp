#include <random>

#include "doctest.h"
#include "edis/fuzz.hpp"
#include "edis/parser.hpp"

using namespace edis;

namespace {

Program parse(std::string_view src) {
  auto p = parse_program(src);
  REQUIRE_MESSAGE(p.ok(), (p ? "" : p.error().message()));
  return std::move(*p);
}

bool same(const FuzzStats& a, const FuzzStats& b) {
  return a.accepted == b.accepted && a.rejected == b.rejected && a.wrongtype == b.wrongtype &&
         a.parse_errors == b.parse_errors && a.decode_failures == b.decode_failures &&
         a.other_errors == b.other_errors && a.commands_executed == b.commands_executed;
}

// Sends every command straight to a store, ignoring the checker, and reports
// whether any reply was WRONGTYPE.
bool hits_wrongtype_unchecked(const Program& p) {
  Store store;
  ValueEnv env;
  for (const auto& c : p.body) {
    std::optional<WireCommand> w;
    try {
      w = to_wire(c, env, p);
    } catch (const std::out_of_range&) {
      continue;  // unbound variable
    }
    if (!w) continue;
    const Reply r = store.exec(*w);
    if (r.is_error() && r.str.rfind("WRONGTYPE", 0) == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("same seed, same run") {
  FuzzConfig cfg;
  cfg.iterations = 300;
  cfg.seed = 9;
  const auto a = run_fuzz(cfg);
  const auto b = run_fuzz(cfg);
  CHECK(same(a.stats, b.stats));
  cfg.seed = 10;
  CHECK_FALSE(same(a.stats, run_fuzz(cfg).stats));
}

TEST_CASE("generated programs print and parse back") {
  std::mt19937_64 rng(3);
  FuzzConfig cfg;
  for (int i = 0; i < 300; ++i) {
    const Program p = generate_program(rng, cfg);
    auto q = parse_program(print_program(p));
    REQUIRE_MESSAGE(q.ok(), print_program(p));
    CHECK(print_program(*q) == print_program(p));
  }
}

TEST_CASE("no soundness violations at seed 42") {
  for (bool strict : {false, true}) {
    FuzzConfig cfg;
    cfg.strict = strict;
    const auto r = run_fuzz(cfg);
    INFO("strict=" << strict);
    if (r.counterexample) FAIL(print_program(r.counterexample->minimized));
    CHECK(r.stats.wrongtype == 0);
    CHECK(r.stats.parse_errors == 0);
    CHECK(r.stats.accepted > 300);
    CHECK(r.stats.rejected > 50);
    if (strict) CHECK(r.stats.decode_failures == 0);
  }
}

TEST_CASE("the generator produces real type confusion") {
  std::mt19937_64 rng(42);
  FuzzConfig cfg;
  int confused = 0, confused_but_accepted = 0;
  for (int i = 0; i < 1000; ++i) {
    const Program p = generate_program(rng, cfg);
    if (!hits_wrongtype_unchecked(p)) continue;
    ++confused;
    if (check_program(p)) ++confused_but_accepted;
  }
  CHECK(confused > 20);
  CHECK(confused_but_accepted == 0);
}

TEST_CASE("classification") {
  CHECK(classify(parse("program { set a 1 sadd a 2 }"), false).verdict == Verdict::Rejected);
  CHECK(classify(parse("program { set a 1 incr a }"), false).verdict == Verdict::Clean);

  // Overwriting a list's element type is accepted outside strict mode and
  // shows up as a decode failure.
  const Program repush = parse("program { lpush q 1 lpush q true rpop q }");
  const auto loose = classify(repush, false);
  CHECK(loose.verdict == Verdict::DecodeFailure);
  CHECK_FALSE(is_violation(loose.verdict, false));
  CHECK(is_violation(Verdict::DecodeFailure, true));
  CHECK(classify(repush, true).verdict == Verdict::Rejected);

  CHECK(classify(parse("program { set a 9223372036854775807 incr a }"), false).verdict ==
        Verdict::OtherError);
  CHECK(is_violation(Verdict::WrongType, false));
  CHECK(is_violation(Verdict::ParseError, false));
  CHECK_FALSE(is_violation(Verdict::OtherError, true));
  CHECK(verdict_name(Verdict::WrongType) == "runtime-WRONGTYPE");
}

TEST_CASE("shrinking keeps the failure and drops the rest") {
  const Program p = parse(
      "record Message { body: text, id: int } record Flag { name: text, on: bool } "
      "program { ping x <- incr c set a 1 lpush q 2 y <- get a sadd s 3 llen q ping }");
  // Synthetic failure: any program that still contains an sadd.
  auto has_sadd = [](const Program& q) {
    for (const auto& c : q.body)
      if (c.op == Opcode::SAdd) return true;
    return false;
  };
  const Program small = shrink(p, has_sadd);
  CHECK(small.body.size() == 1);
  CHECK(small.body[0].op == Opcode::SAdd);
  CHECK(small.records.empty());

  // Binders only go when the predicate allows it.
  const Program b = shrink(p, [](const Program& q) {
    for (const auto& c : q.body)
      if (c.binder == "y") return true;
    return false;
  });
  REQUIRE(b.body.size() == 1);
  CHECK(b.body[0].binder == "y");
}
