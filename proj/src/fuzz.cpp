#include "edis/fuzz.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace edis {
namespace {

constexpr std::array kKeys = {"a", "b", "c", "q", "s", "h"};
constexpr std::array kFields = {"f", "g", "name"};
constexpr std::array kTexts = {"",     "hello", "12",       "1.5", "true",
                               "-0",   "x y",   "h\xc3\xa9llo", "{}",  "007"};

class Gen {
 public:
  Gen(std::mt19937_64& rng, const FuzzConfig& cfg) : rng_(rng), cfg_(cfg) {}

  Program program() {
    Program p;
    for (const auto& r : fuzz_record_pool())
      if (chance(2, 3)) p.records.push_back(r);
    prog_ = &p;

    const std::size_t len = 1 + below(cfg_.max_len);
    CheckOptions opts{cfg_.strict};
    for (std::size_t i = 0; i < len; ++i) {
      if (chance(1, 5)) {
        // Deliberately unguided; usually ill-typed.
        Command c = candidate(false);
        p.body.push_back(c);
        if (auto t = check_command(dict_, env_, p, c, opts)) accept(c, std::move(*t));
        continue;
      }
      for (int attempt = 0; attempt < 16; ++attempt) {
        Command c = candidate(true);
        if (auto t = check_command(dict_, env_, p, c, opts)) {
          p.body.push_back(c);
          accept(c, std::move(*t));
          break;
        }
      }
    }
    return p;
  }

 private:
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

  void accept(Command& c, CommandTyping t) {
    dict_ = std::move(t.post);
    if (c.binder) env_[*c.binder] = t.result;
  }

  BaseType base() {
    const std::uint64_t n = 4 + prog_->records.size();
    const std::uint64_t i = below(n);
    switch (i) {
      case 0: return BaseType::integer();
      case 1: return BaseType::dbl();
      case 2: return BaseType::boolean();
      case 3: return BaseType::text();
      default: return BaseType::rec(prog_->records[i - 4].name);
    }
  }

  TypeTag tag() {
    switch (below(4)) {
      case 0: return TypeTag::string_of(base());
      case 1: return TypeTag::list_of(base());
      case 2: return TypeTag::set_of(base());
      default: {
        FieldDict fs;
        for (const char* f : kFields)
          if (chance(1, 2)) fs.push_back({f, TypeTag::string_of(base())});
        return TypeTag::hash_of(std::move(fs));
      }
    }
  }

  std::int64_t integer() {
    switch (below(6)) {
      case 0: return std::numeric_limits<std::int64_t>::max() - static_cast<std::int64_t>(below(3));
      case 1: return std::numeric_limits<std::int64_t>::min() + static_cast<std::int64_t>(below(3));
      default: return static_cast<std::int64_t>(below(2001)) - 1000;
    }
  }

  double real() {
    if (chance(1, 10)) return 1e300 * (chance(1, 2) ? 1 : -1);
    return (static_cast<double>(below(200001)) - 100000.0) / 100.0;
  }

  Expr value(const BaseType& b) {
    std::vector<std::string> vars;
    for (const auto& [name, rt] : env_)
      if ((b.kind == BaseType::Kind::Integer && rt.kind == ResultType::Kind::Integer) ||
          (b.kind == BaseType::Kind::Double && rt.kind == ResultType::Kind::Double) ||
          (b.kind == BaseType::Kind::Boolean && rt.kind == ResultType::Kind::Boolean))
        vars.push_back(name);
    if (!vars.empty() && chance(1, 3)) return Expr{Var{pick(vars)}};
    switch (b.kind) {
      case BaseType::Kind::Integer: return Expr{IntLit{integer()}};
      case BaseType::Kind::Double: return Expr{FloatLit{real()}};
      case BaseType::Kind::Boolean: return Expr{BoolLit{chance(1, 2)}};
      case BaseType::Kind::Text: return Expr{TextLit{kTexts[below(kTexts.size())]}};
      case BaseType::Kind::Record: {
        RecordLit r{b.record, {}};
        if (const RecordDecl* d = prog_->find_record(b.record))
          for (const auto& f : d->fields) r.args.push_back(value(f.base));
        return Expr{std::move(r)};
      }
    }
    return Expr{IntLit{0}};
  }

  std::string any_key() { return kKeys[below(kKeys.size())]; }

  // A tracked key of the given kind, or any key.
  std::string key_for(std::optional<TypeTag::Kind> kind, bool guided) {
    if (guided && chance(3, 4)) {
      std::vector<std::string> ks;
      for (const auto& e : dict_)
        if (!kind || e.tag.kind == *kind) ks.push_back(e.key);
      if (!ks.empty()) return pick(ks);
    }
    return any_key();
  }

  BaseType element_of(const std::string& k, bool guided) {
    if (guided && chance(3, 4))
      if (auto t = dict_get(dict_, k); t && t->kind != TypeTag::Kind::Hash) return t->base;
    return base();
  }

  Command candidate(bool guided) {
    Command c;
    c.op = static_cast<Opcode>(below(static_cast<std::uint64_t>(Opcode::Declare) + 1));
    using K = TypeTag::Kind;
    switch (c.op) {
      case Opcode::Ping: break;
      case Opcode::Set:
      case Opcode::SetNX: {
        auto k = key_for(K::String, guided);
        c.values.push_back(value(element_of(k, guided)));
        c.keys.push_back(std::move(k));
        break;
      }
      case Opcode::Get: c.keys.push_back(key_for(K::String, guided)); break;
      case Opcode::Del: c.keys.push_back(key_for(std::nullopt, guided)); break;
      case Opcode::Incr: c.keys.push_back(key_for(K::String, guided)); break;
      case Opcode::IncrByFloat:
        c.keys.push_back(key_for(K::String, guided));
        c.values.push_back(value(guided ? BaseType::dbl() : base()));
        break;
      case Opcode::LPush:
      case Opcode::SAdd: {
        auto k = key_for(c.op == Opcode::LPush ? K::List : K::Set, guided);
        c.values.push_back(value(element_of(k, guided)));
        c.keys.push_back(std::move(k));
        break;
      }
      case Opcode::LLen:
      case Opcode::RPop: c.keys.push_back(key_for(K::List, guided)); break;
      case Opcode::SInter:
        c.keys.push_back(key_for(K::Set, guided));
        c.keys.push_back(key_for(K::Set, guided));
        break;
      case Opcode::HSet:
      case Opcode::HGet: {
        auto k = key_for(K::Hash, guided);
        std::string f = kFields[below(kFields.size())];
        if (guided && chance(3, 4))
          if (auto t = dict_get(dict_, k); t && t->kind == K::Hash && !t->fields.empty())
            f = pick(t->fields).key;
        c.field = f;
        if (c.op == Opcode::HSet) {
          auto ft = hash_get(dict_, k, f);
          c.values.push_back(value(guided && ft && chance(3, 4) ? ft->base : base()));
        }
        c.keys.push_back(std::move(k));
        break;
      }
      case Opcode::Declare:
        c.keys.push_back(guided ? any_key() : key_for(std::nullopt, true));
        c.declared = tag();
        break;
    }
    if (c.op != Opcode::Declare && chance(1, 4)) c.binder = "v" + std::to_string(next_var_++);
    return c;
  }

  std::mt19937_64& rng_;
  const FuzzConfig& cfg_;
  const Program* prog_ = nullptr;
  TypeDict dict_;
  VarEnv env_;
  int next_var_ = 0;
};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Rejected: return "rejected";
    case Verdict::Clean: return "clean";
    case Verdict::WrongType: return "runtime-WRONGTYPE";
    case Verdict::ParseError: return "runtime-parse-error";
    case Verdict::DecodeFailure: return "decode-failure";
    case Verdict::OtherError: return "other-runtime-error";
  }
  return "?";
}

bool is_violation(Verdict v, bool strict) {
  return v == Verdict::WrongType || v == Verdict::ParseError ||
         (strict && v == Verdict::DecodeFailure);
}

Classified classify(const Program& p, bool strict) {
  auto report = check_program(p, {}, CheckOptions{strict});
  if (!report) return {Verdict::Rejected, report.error().message()};
  SimulatorBackend sim;
  auto outcome = run_program(p, *report, sim);
  if (outcome) return {Verdict::Clean, {}};
  const RuntimeFailure& f = outcome.error();
  std::string where = std::to_string(f.span.line) + ":" + std::to_string(f.span.column) + ": " +
                      std::string(opcode_name(f.op)) + ": " + f.message;
  if (f.kind == RuntimeFailure::Kind::Decode) return {Verdict::DecodeFailure, where};
  if (starts_with(f.message, "WRONGTYPE")) return {Verdict::WrongType, where};
  if (f.message == kNotInteger || f.message == kNotFloat) return {Verdict::ParseError, where};
  return {Verdict::OtherError, where};
}

const std::vector<RecordDecl>& fuzz_record_pool() {
  static const std::vector<RecordDecl> pool = {
      {"Message", {{"body", BaseType::text()}, {"id", BaseType::integer()}}},
      {"Point", {{"x", BaseType::dbl()}, {"y", BaseType::dbl()}}},
      {"Flag", {{"name", BaseType::text()}, {"on", BaseType::boolean()}}},
  };
  return pool;
}

Program generate_program(std::mt19937_64& rng, const FuzzConfig& cfg) {
  return Gen(rng, cfg).program();
}

Program shrink(Program p, const std::function<bool(const Program&)>& still_fails) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = p.body.size(); i-- > 0;) {
      Program q = p;
      q.body.erase(q.body.begin() + static_cast<std::ptrdiff_t>(i));
      if (still_fails(q)) {
        p = std::move(q);
        progress = true;
      }
    }
    for (std::size_t i = 0; i < p.body.size(); ++i) {
      if (!p.body[i].binder) continue;
      Program q = p;
      q.body[i].binder.reset();
      if (still_fails(q)) {
        p = std::move(q);
        progress = true;
      }
    }
    for (std::size_t i = p.records.size(); i-- > 0;) {
      Program q = p;
      q.records.erase(q.records.begin() + static_cast<std::ptrdiff_t>(i));
      if (still_fails(q)) {
        p = std::move(q);
        progress = true;
      }
    }
  }
  return p;
}

FuzzReport run_fuzz(const FuzzConfig& cfg) {
  FuzzReport report;
  std::mt19937_64 rng(cfg.seed);
  auto& s = report.stats;
  for (std::uint64_t it = 0; it < cfg.iterations; ++it) {
    Program p = generate_program(rng, cfg);
    Classified c = classify(p, cfg.strict);
    switch (c.verdict) {
      case Verdict::Rejected: ++s.rejected; continue;
      case Verdict::Clean: break;
      case Verdict::WrongType: ++s.wrongtype; break;
      case Verdict::ParseError: ++s.parse_errors; break;
      case Verdict::DecodeFailure: ++s.decode_failures; break;
      case Verdict::OtherError: ++s.other_errors; break;
    }
    ++s.accepted;
    s.commands_executed += p.body.size();
    if (is_violation(c.verdict, cfg.strict) && !report.counterexample) {
      const Verdict target = c.verdict;
      Program small = shrink(p, [&](const Program& q) {
        return classify(q, cfg.strict).verdict == target;
      });
      report.counterexample =
          Counterexample{it, target, classify(small, cfg.strict).detail, std::move(p),
                         std::move(small)};
    }
  }
  return report;
}

}  // namespace edis
