#include "edis/checker.hpp"

#include <set>

namespace edis {

std::string to_string(const ResultType& r) {
  switch (r.kind) {
    case ResultType::Kind::Status: return "Status";
    case ResultType::Kind::Integer: return "Integer";
    case ResultType::Kind::Double: return "Double";
    case ResultType::Kind::Boolean: return "Boolean";
    case ResultType::Kind::Unit: return "Unit";
    case ResultType::Kind::Maybe: return "Maybe<" + to_string(r.base) + ">";
    case ResultType::Kind::ListResult: return "List<" + to_string(r.base) + ">";
  }
  return "?";
}

std::string_view constraint_id(Constraint c) {
  switch (c) {
    case Constraint::NotMemberViolated: return "NotMember-violated";
    case Constraint::ListOrNXViolated: return "ListOrNX-violated";
    case Constraint::SetOrNXViolated: return "SetOrNX-violated";
    case Constraint::StringOrNXViolated: return "StringOrNX-violated";
    case Constraint::HashOrNXViolated: return "HashOrNX-violated";
    case Constraint::GetEqualityFailed: return "GetEquality-failed";
    case Constraint::GetStuck: return "GetStuck";
    case Constraint::ElementTypeMismatch: return "ElementTypeMismatch";
    case Constraint::UnknownRecord: return "UnknownRecord";
    case Constraint::UnknownVariable: return "UnknownVariable";
    case Constraint::ArityMismatch: return "ArityMismatch";
  }
  return "?";
}

std::string TypeError::message() const {
  return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
         std::string(opcode_name(op)) + ": " + std::string(constraint_id(constraint)) +
         ": " + detail;
}

namespace {

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

std::string describe(const Lookup& l) {
  return l ? to_string(*l) : std::string("nothing (key absent)");
}

class CommandChecker {
 public:
  CommandChecker(const TypeDict& xs, const VarEnv& env, const Program& prog,
                 const Command& c, const CheckOptions& opts)
      : xs_(xs), env_(env), prog_(prog), c_(c), opts_(opts) {}

  Result<CommandTyping, TypeError> run() {
    switch (c_.op) {
      case Opcode::Ping:
        return ok(xs_, ResultType::status());
      case Opcode::Set: {
        auto a = value_type();
        if (!a) return a.error();
        return ok(dict_set(xs_, key(), TypeTag::string_of(*a)), ResultType::status());
      }
      case Opcode::SetNX: {
        auto a = value_type();
        if (!a) return a.error();
        if (!dict_member(xs_, key()))
          return ok(dict_set(xs_, key(), TypeTag::string_of(*a)), ResultType::boolean());
        // The key may be tracked but absent from the store (declared, or a
        // container emptied by rpop), in which case SETNX does write. The
        // tracked tag must already describe the value it would write.
        auto found = dict_get(xs_, key());
        if (*found != TypeTag::string_of(*a))
          return fail(Constraint::GetEqualityFailed,
                      "setnx on tracked key " + quoted(key()) + " requires " +
                          to_string(TypeTag::string_of(*a)) + ", found " +
                          describe(found));
        return ok(xs_, ResultType::boolean());
      }
      case Opcode::Get: {
        auto t = expect_get(key(), TypeTag::Kind::String, "string<a>");
        if (!t) return t.error();
        return ok(xs_, ResultType::maybe(t->base));
      }
      case Opcode::Del:
        return ok(dict_del(xs_, key()), ResultType::integer());
      case Opcode::Incr: {
        auto t = expect_exact(key(), TypeTag::string_of(BaseType::integer()));
        if (!t) return t.error();
        return ok(xs_, ResultType::integer());
      }
      case Opcode::IncrByFloat: {
        auto a = value_type();
        if (!a) return a.error();
        auto t = expect_exact(key(), TypeTag::string_of(BaseType::dbl()));
        if (!t) return t.error();
        if (*a != BaseType::dbl())
          return fail(Constraint::ElementTypeMismatch,
                      "incrbyfloat increment must be float, found " + to_string(*a));
        return ok(xs_, ResultType::dbl());
      }
      case Opcode::LPush:
        return push(TypeTag::Kind::List, is_list, Constraint::ListOrNXViolated, "list");
      case Opcode::SAdd:
        return push(TypeTag::Kind::Set, is_set, Constraint::SetOrNXViolated, "set");
      case Opcode::LLen:
        if (!or_nx(is_list, xs_, key()))
          return fail(Constraint::ListOrNXViolated, "key " + quoted(key()) +
                                                        " must hold a list or be absent, found " +
                                                        describe(dict_get(xs_, key())));
        return ok(xs_, ResultType::integer());
      case Opcode::RPop: {
        auto t = expect_get(key(), TypeTag::Kind::List, "list<a>");
        if (!t) return t.error();
        return ok(xs_, ResultType::maybe(t->base));
      }
      case Opcode::SInter: {
        auto t1 = expect_get(c_.keys[0], TypeTag::Kind::Set, "set<x>");
        if (!t1) return t1.error();
        auto t2 = expect_get(c_.keys[1], TypeTag::Kind::Set, "set<x>");
        if (!t2) return t2.error();
        if (t1->base != t2->base)
          return fail(Constraint::GetEqualityFailed,
                      "sinter operands must share an element type: " + quoted(c_.keys[0]) +
                          " is " + to_string(*t1) + ", " + quoted(c_.keys[1]) + " is " +
                          to_string(*t2));
        return ok(xs_, ResultType::list(t1->base));
      }
      case Opcode::HSet: {
        auto a = value_type();
        if (!a) return a.error();
        if (!or_nx(is_hash, xs_, key()))
          return fail(Constraint::HashOrNXViolated, "key " + quoted(key()) +
                                                        " must hold a hash or be absent, found " +
                                                        describe(dict_get(xs_, key())));
        return ok(hash_set(xs_, key(), *c_.field, TypeTag::string_of(*a)),
                  ResultType::boolean());
      }
      case Opcode::HGet: {
        auto found = hash_get(xs_, key(), *c_.field);
        if (!found)
          return fail(Constraint::GetStuck, "field " + quoted(*c_.field) + " of hash " +
                                                quoted(key()) + " is not known to exist (" +
                                                describe(dict_get(xs_, key())) + ")");
        if (found->kind != TypeTag::Kind::String)
          return fail(Constraint::GetEqualityFailed,
                      "field " + quoted(*c_.field) + " must be string<a>, found " +
                          to_string(*found));
        return ok(xs_, ResultType::maybe(found->base));
      }
      case Opcode::Declare: {
        if (dict_member(xs_, key()))
          return fail(Constraint::NotMemberViolated,
                      "key " + quoted(key()) + " is already present as " +
                          describe(dict_get(xs_, key())));
        if (auto missing = unknown_record(*c_.declared))
          return fail(Constraint::UnknownRecord,
                      "record " + quoted(*missing) + " is not declared");
        return ok(dict_set(xs_, key(), *c_.declared), ResultType::unit());
      }
    }
    return fail(Constraint::ArityMismatch, "unsupported command");
  }

  std::optional<std::string> unknown_record(const TypeTag& t) const {
    if (t.kind == TypeTag::Kind::Hash) {
      for (const auto& f : t.fields)
        if (auto m = unknown_record(f.tag)) return m;
      return std::nullopt;
    }
    if (t.base.is_record() && !prog_.find_record(t.base.record)) return t.base.record;
    return std::nullopt;
  }

 private:
  const std::string& key() const { return c_.keys.front(); }

  Result<CommandTyping, TypeError> ok(TypeDict post, ResultType r) const {
    return CommandTyping{std::move(post), std::move(r)};
  }

  TypeError fail(Constraint constraint, std::string detail) const {
    return TypeError{c_.span, c_.op, constraint, std::move(detail)};
  }

  Result<BaseType, TypeError> value_type() const {
    return infer_expr(env_, prog_, c_.values.front(), c_);
  }

  // Get xs k ~ <kind> a : a stuck lookup and a mismatched head constructor
  // are reported differently.
  Result<TypeTag, TypeError> expect_get(std::string_view k, TypeTag::Kind kind,
                                        std::string_view shape) const {
    auto found = dict_get(xs_, k);
    if (!found)
      return fail(Constraint::GetStuck,
                  "key " + quoted(k) + " is not known to exist (expected " +
                      std::string(shape) + ")");
    if (found->kind != kind)
      return fail(Constraint::GetEqualityFailed, "key " + quoted(k) + " must be " +
                                                     std::string(shape) + ", found " +
                                                     to_string(*found));
    return *found;
  }

  Result<TypeTag, TypeError> expect_exact(std::string_view k, const TypeTag& want) const {
    auto found = dict_get(xs_, k);
    if (!found)
      return fail(Constraint::GetStuck, "key " + quoted(k) +
                                            " is not known to exist (expected " +
                                            to_string(want) + ")");
    if (*found != want)
      return fail(Constraint::GetEqualityFailed, "key " + quoted(k) + " must be " +
                                                     to_string(want) + ", found " +
                                                     to_string(*found));
    return *found;
  }

  Result<CommandTyping, TypeError> push(TypeTag::Kind kind, TagPredicate pred,
                                        Constraint violated, std::string_view what) const {
    auto a = value_type();
    if (!a) return a.error();
    auto found = dict_get(xs_, key());
    if (!or_nx(pred, xs_, key()))
      return fail(violated, "key " + quoted(key()) + " must hold a " + std::string(what) +
                                " or be absent, found " + describe(found));
    TypeTag tag{kind, *a, {}};
    if (opts_.strict && found && found->base != *a)
      return fail(Constraint::ElementTypeMismatch,
                  "strict mode: " + quoted(key()) + " holds " + to_string(*found) +
                      ", cannot add " + to_string(*a));
    return ok(dict_set(xs_, key(), std::move(tag)), ResultType::integer());
  }

  const TypeDict& xs_;
  const VarEnv& env_;
  const Program& prog_;
  const Command& c_;
  const CheckOptions& opts_;
};

}  // namespace

Result<BaseType, TypeError> infer_expr(const VarEnv& env, const Program& records,
                                       const Expr& e, const Command& at) {
  auto fail = [&](Constraint c, std::string detail) -> Result<BaseType, TypeError> {
    return TypeError{at.span, at.op, c, std::move(detail)};
  };
  if (std::holds_alternative<IntLit>(e.node)) return BaseType::integer();
  if (std::holds_alternative<FloatLit>(e.node)) return BaseType::dbl();
  if (std::holds_alternative<BoolLit>(e.node)) return BaseType::boolean();
  if (std::holds_alternative<TextLit>(e.node)) return BaseType::text();

  if (const auto* v = std::get_if<Var>(&e.node)) {
    auto it = env.find(v->name);
    if (it == env.end())
      return fail(Constraint::UnknownVariable, "variable '" + v->name + "' is not bound");
    switch (it->second.kind) {
      case ResultType::Kind::Integer: return BaseType::integer();
      case ResultType::Kind::Double: return BaseType::dbl();
      case ResultType::Kind::Boolean: return BaseType::boolean();
      default:
        return fail(Constraint::ElementTypeMismatch,
                    "variable '" + v->name + "' has type " + to_string(it->second) +
                        ", which cannot be used as a value");
    }
  }

  const auto& r = std::get<RecordLit>(e.node);
  const RecordDecl* decl = records.find_record(r.name);
  if (!decl) return fail(Constraint::UnknownRecord, "record '" + r.name + "' is not declared");
  if (r.args.size() != decl->fields.size())
    return fail(Constraint::ArityMismatch,
                "record '" + r.name + "' has " + std::to_string(decl->fields.size()) +
                    " fields, given " + std::to_string(r.args.size()));
  for (std::size_t i = 0; i < r.args.size(); ++i) {
    auto t = infer_expr(env, records, r.args[i], at);
    if (!t) return t;
    if (*t != decl->fields[i].base)
      return fail(Constraint::ElementTypeMismatch,
                  "field '" + decl->fields[i].name + "' of '" + r.name + "' expects " +
                      to_string(decl->fields[i].base) + ", given " + to_string(*t));
  }
  return BaseType::rec(r.name);
}

Result<CommandTyping, TypeError> check_command(const TypeDict& xs, const VarEnv& env,
                                               const Program& records, const Command& c,
                                               const CheckOptions& opts) {
  const Signature sig = signature(c.op);
  if (static_cast<int>(c.keys.size()) != sig.keys ||
      static_cast<int>(c.values.size()) != sig.values ||
      c.field.has_value() != (sig.fields == 1) ||
      c.declared.has_value() != (c.op == Opcode::Declare))
    return TypeError{c.span, c.op, Constraint::ArityMismatch,
                     "wrong number of arguments for '" + std::string(opcode_name(c.op)) + "'"};
  return CommandChecker(xs, env, records, c, opts).run();
}

CheckReport check_program(const Program& p, const TypeDict& initial, const CheckOptions& opts) {
  // Assumed entries are treated as declarations made before the first
  // command.
  std::set<std::string> seen;
  for (const auto& e : initial) {
    Command pseudo;
    pseudo.op = Opcode::Declare;
    pseudo.keys = {e.key};
    pseudo.declared = e.tag;
    if (!seen.insert(e.key).second)
      return TypeError{pseudo.span, Opcode::Declare, Constraint::NotMemberViolated,
                       "assumed dictionary lists key '" + e.key + "' twice"};
    if (auto missing = CommandChecker({}, {}, p, pseudo, opts).unknown_record(e.tag))
      return TypeError{pseudo.span, Opcode::Declare, Constraint::UnknownRecord,
                       "assumed key '" + e.key + "' refers to undeclared record '" +
                           *missing + "'"};
  }

  TypeDict xs = initial;
  VarEnv env;
  ResultType last = ResultType::unit();
  std::vector<ResultType> steps;
  for (const auto& c : p.body) {
    auto step = check_command(xs, env, p, c, opts);
    if (!step) return step.error();
    xs = std::move(step->post);
    last = step->result;
    steps.push_back(last);
    if (c.binder) env[*c.binder] = last;
  }
  return CheckOk{std::move(xs), last, std::move(steps)};
}

}  // namespace edis
