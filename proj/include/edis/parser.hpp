#pragma once

#include <string>
#include <string_view>

#include "edis/ast.hpp"
#include "edis/result.hpp"

namespace edis {

struct ParseError {
  int line = 1;
  int column = 1;
  std::string expected;
  std::string found;

  /// "3:7: expected value expression, found '}'"
  std::string message() const;
};

/// Parses a whole source file: record declarations followed by one
/// `program { ... }` block. Stops at the first syntax violation.
Result<Program, ParseError> parse_program(std::string_view source);

/// Parses a standalone type tag such as "list<Message>" or
/// "hash<name: string<text>>". Used for dictionary assumption files.
Result<TypeTag, ParseError> parse_type_tag(std::string_view source);

/// Canonical text; parse_program(print_program(p)) == p.
std::string print_program(const Program& p);
std::string print_command(const Command& c);
std::string print_expr(const Expr& e);
std::string print_record(const RecordDecl& r);

/// Shortest round-trip spelling that always contains a decimal point, so it
/// lexes back as a float literal.
std::string format_float_literal(double v);

}  // namespace edis
