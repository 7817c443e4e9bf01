#pragma once

// Byte encodings of DSL values as stored in the key-value store. The
// formats are normative and bit-exact:
//
//   Integer  ASCII signed decimal, no leading zeros, no "-0"
//   Double   shortest round-trip decimal, always with '.' or an exponent
//   Boolean  "true" / "false"
//   Text     the UTF-8 bytes, verbatim
//   Record   JSON object, declaration-order fields, no whitespace
//
// Integers and doubles are textual so that INCR / INCRBYFLOAT on the server
// operate on them directly.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edis/ast.hpp"
#include "edis/result.hpp"

namespace edis {

struct FieldValue;

/// A DSL value together with its base type. Doubles are finite.
struct TypedValue {
  BaseType base;
  std::variant<std::int64_t, double, bool, std::string, std::vector<FieldValue>> payload;

  static TypedValue integer(std::int64_t v);
  static TypedValue dbl(double v);
  static TypedValue boolean(bool v);
  static TypedValue text(std::string v);
  static TypedValue record(std::string name, std::vector<FieldValue> fields);

  friend bool operator==(const TypedValue&, const TypedValue&);
};

struct FieldValue {
  std::string name;
  TypedValue value;

  friend bool operator==(const FieldValue&, const FieldValue&) = default;
};

struct DecodeError {
  BaseType expected;
  std::string bytes;

  std::string message() const;
};

std::string encode(const TypedValue& v);

/// Inverse of encode on its image; anything else is a DecodeError. Record
/// bases are resolved against `records`.
Result<TypedValue, DecodeError> decode(std::string_view bytes, const BaseType& base,
                                       std::span<const RecordDecl> records);

std::string encode_integer(std::int64_t v);
std::string encode_double(double v);

/// Human-readable rendering used by the CLI: text is quoted, records print as
/// Name{field: value, ...}.
std::string display(const TypedValue& v);

}  // namespace edis
