#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace edis {

/// Scalar element type of a stored value. Record names a declared record.
struct BaseType {
  enum class Kind { Integer, Double, Boolean, Text, Record };

  Kind kind = Kind::Integer;
  std::string record;  // only meaningful for Kind::Record

  static BaseType integer() { return {Kind::Integer, {}}; }
  static BaseType dbl() { return {Kind::Double, {}}; }
  static BaseType boolean() { return {Kind::Boolean, {}}; }
  static BaseType text() { return {Kind::Text, {}}; }
  static BaseType rec(std::string name) { return {Kind::Record, std::move(name)}; }

  bool is_record() const { return kind == Kind::Record; }

  friend bool operator==(const BaseType&, const BaseType&) = default;
};

struct DictEntry;

/// Symbolic type of the value held by a key: string-of, list-of, set-of,
/// or a hash whose fields carry their own tags.
struct TypeTag {
  enum class Kind { String, List, Set, Hash };

  Kind kind = Kind::String;
  BaseType base;                  // String/List/Set
  std::vector<DictEntry> fields;  // Hash only

  static TypeTag string_of(BaseType b);
  static TypeTag list_of(BaseType b);
  static TypeTag set_of(BaseType b);
  static TypeTag hash_of(std::vector<DictEntry> fs);

  friend bool operator==(const TypeTag&, const TypeTag&);
};

struct DictEntry {
  std::string key;
  TypeTag tag;

  friend bool operator==(const DictEntry&, const DictEntry&) = default;
};

inline TypeTag TypeTag::string_of(BaseType b) { return {Kind::String, std::move(b), {}}; }
inline TypeTag TypeTag::list_of(BaseType b) { return {Kind::List, std::move(b), {}}; }
inline TypeTag TypeTag::set_of(BaseType b) { return {Kind::Set, std::move(b), {}}; }
inline TypeTag TypeTag::hash_of(std::vector<DictEntry> fs) {
  return {Kind::Hash, BaseType{}, std::move(fs)};
}

inline bool operator==(const TypeTag& a, const TypeTag& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == TypeTag::Kind::Hash) return a.fields == b.fields;
  return a.base == b.base;
}

/// Association list from key symbol to tag. Order matters; lookups take the
/// first match.
using TypeDict = std::vector<DictEntry>;
/// Field dictionary of a hash. Same shape as a TypeDict.
using FieldDict = std::vector<DictEntry>;

struct RecordField {
  std::string name;
  BaseType base;

  friend bool operator==(const RecordField&, const RecordField&) = default;
};

struct RecordDecl {
  std::string name;
  std::vector<RecordField> fields;

  const RecordField* find(std::string_view field) const;

  friend bool operator==(const RecordDecl&, const RecordDecl&) = default;
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr;

struct IntLit {
  std::int64_t value = 0;
  friend bool operator==(const IntLit&, const IntLit&) = default;
};
struct FloatLit {
  double value = 0.0;
  friend bool operator==(const FloatLit&, const FloatLit&) = default;
};
struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};
struct TextLit {
  std::string value;
  friend bool operator==(const TextLit&, const TextLit&) = default;
};
struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};
struct RecordLit {
  std::string name;
  std::vector<Expr> args;
  friend bool operator==(const RecordLit&, const RecordLit&);
};

struct Expr {
  std::variant<IntLit, FloatLit, BoolLit, TextLit, Var, RecordLit> node;

  friend bool operator==(const Expr&, const Expr&) = default;
};

inline bool operator==(const RecordLit& a, const RecordLit& b) {
  return a.name == b.name && a.args == b.args;
}

/// Variable names referenced by `e`, recursively.
std::set<std::string> expr_free_vars(const Expr& e);

// ---------------------------------------------------------------------------
// Commands and programs

enum class Opcode {
  Ping,
  Set,
  SetNX,
  Get,
  Del,
  Incr,
  IncrByFloat,
  LPush,
  LLen,
  RPop,
  SAdd,
  SInter,
  HSet,
  HGet,
  Declare,
};

/// Surface spelling, e.g. "incrbyfloat".
std::string_view opcode_name(Opcode op);
std::optional<Opcode> opcode_from_name(std::string_view name);

/// Number of key symbols, hash-field symbols and value expressions an
/// opcode takes.
struct Signature {
  int keys = 0;
  int fields = 0;
  int values = 0;
};
Signature signature(Opcode op);

struct Span {
  int line = 1;
  int column = 1;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Command {
  Opcode op = Opcode::Ping;
  std::vector<std::string> keys;
  std::optional<std::string> field;  // hset / hget
  std::vector<Expr> values;
  std::optional<TypeTag> declared;  // declare only
  std::optional<std::string> binder;
  Span span;

  /// Structural equality. Spans are positional metadata and are ignored.
  friend bool operator==(const Command& a, const Command& b) {
    return a.op == b.op && a.keys == b.keys && a.field == b.field &&
           a.values == b.values && a.declared == b.declared &&
           a.binder == b.binder;
  }
};

struct Program {
  std::vector<RecordDecl> records;
  std::vector<Command> body;

  const RecordDecl* find_record(std::string_view name) const;

  friend bool operator==(const Program&, const Program&) = default;
};

bool is_symbol(std::string_view s);

// Surface spellings shared by the printer, the JSON reports and the CLI.
std::string to_string(const BaseType& b);
std::string to_string(const TypeTag& t);

}  // namespace edis
