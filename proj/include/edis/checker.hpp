#pragma once

// Static checker. A program is read as a chain of Hoare triples over a
// symbolic key->type dictionary: every command has a precondition on the
// incoming dictionary and a transformer producing the outgoing one, and the
// postcondition of each command is the precondition context of the next.
// A program is accepted only if every precondition holds, starting from the
// empty dictionary (or an explicitly assumed one).

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edis/ast.hpp"
#include "edis/result.hpp"
#include "edis/typedict.hpp"

namespace edis {

struct ResultType {
  enum class Kind { Status, Integer, Double, Boolean, Unit, Maybe, ListResult };

  Kind kind = Kind::Unit;
  BaseType base;  // Maybe / ListResult

  static ResultType status() { return {Kind::Status, {}}; }
  static ResultType integer() { return {Kind::Integer, {}}; }
  static ResultType dbl() { return {Kind::Double, {}}; }
  static ResultType boolean() { return {Kind::Boolean, {}}; }
  static ResultType unit() { return {Kind::Unit, {}}; }
  static ResultType maybe(BaseType b) { return {Kind::Maybe, std::move(b)}; }
  static ResultType list(BaseType b) { return {Kind::ListResult, std::move(b)}; }

  friend bool operator==(const ResultType& a, const ResultType& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::Maybe || a.kind == Kind::ListResult) return a.base == b.base;
    return true;
  }
};

/// "Status", "Integer", "Maybe<Message>", "List<int>", ...
std::string to_string(const ResultType& r);

/// Machine-readable names of the constraints a command can violate.
enum class Constraint {
  NotMemberViolated,
  ListOrNXViolated,
  SetOrNXViolated,
  StringOrNXViolated,
  HashOrNXViolated,
  GetEqualityFailed,
  GetStuck,
  ElementTypeMismatch,
  UnknownRecord,
  UnknownVariable,
  ArityMismatch,
};

/// Stable identifier, e.g. "SetOrNX-violated".
std::string_view constraint_id(Constraint c);

struct TypeError {
  Span span;
  Opcode op = Opcode::Ping;
  Constraint constraint = Constraint::GetStuck;
  std::string detail;

  /// "4:3: sadd: SetOrNX-violated: ..."
  std::string message() const;
};

struct CheckOk {
  TypeDict final_dict;
  ResultType result;
  /// Result type of each command, in program order.
  std::vector<ResultType> steps;
};

using CheckReport = Result<CheckOk, TypeError>;

struct CheckOptions {
  /// Reject lpush / sadd onto an existing container whose element type
  /// differs from the pushed value's type.
  bool strict = false;
};

using VarEnv = std::map<std::string, ResultType, std::less<>>;

struct CommandTyping {
  TypeDict post;
  ResultType result;
};

Result<BaseType, TypeError> infer_expr(const VarEnv& env, const Program& records,
                                       const Expr& e, const Command& at);

Result<CommandTyping, TypeError> check_command(const TypeDict& xs, const VarEnv& env,
                                               const Program& records, const Command& c,
                                               const CheckOptions& opts = {});

CheckReport check_program(const Program& p, const TypeDict& initial = {},
                          const CheckOptions& opts = {});

}  // namespace edis
