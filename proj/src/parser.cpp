#include "edis/parser.hpp"

#include <charconv>
#include <set>
#include <system_error>
#include <utility>
#include <vector>

#include "edis/codec.hpp"
#include "edis/text.hpp"

namespace edis {

std::string ParseError::message() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": expected " +
         expected + ", found " + found;
}

namespace {

enum class Tok {
  Name,
  Int,
  Float,
  String,
  LBrace,
  RBrace,
  LAngle,
  RAngle,
  Colon,
  Comma,
  Arrow,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // raw spelling; decoded contents for strings
  std::int64_t int_value = 0;
  double float_value = 0.0;
  int line = 1;
  int column = 1;
};

struct Failure {
  ParseError error;
};

constexpr int kMaxExprDepth = 64;

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_name_char(char c) { return is_name_start(c) || is_digit(c) || c == '-'; }

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string literal";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(std::move(t));
        return out;
      }
      const char c = src_[pos_];
      if (is_name_start(c)) {
        lex_name(t);
      } else if (is_digit(c) || (c == '-' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else if (c == '<' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        t.kind = Tok::Arrow;
        t.text = "<-";
        advance(2);
      } else {
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case '<': t.kind = Tok::LAngle; break;
          case '>': t.kind = Tok::RAngle; break;
          case ':': t.kind = Tok::Colon; break;
          case ',': t.kind = Tok::Comma; break;
          default:
            fail(t.line, t.column, "token", quote_bytes(src_.substr(pos_, 1)));
        }
        t.text = std::string(1, c);
        advance(1);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(int line, int col, std::string expected, std::string found) {
    throw Failure{ParseError{line, col, std::move(expected), std::move(found)}};
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else {
        return;
      }
    }
  }

  void lex_name(Token& t) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_name_char(src_[pos_])) advance(1);
    t.kind = Tok::Name;
    t.text = std::string(src_.substr(start, pos_ - start));
  }

  void lex_number(Token& t) {
    const std::size_t start = pos_;
    if (src_[pos_] == '-') advance(1);
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance(1);
    bool is_float = false;
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
      is_float = true;
      advance(1);
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance(1);
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t look = pos_ + 1;
        if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
        if (look >= src_.size() || !is_digit(src_[look]))
          fail(t.line, t.column, "exponent digits", describe_rest(start));
        advance(look - pos_);
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance(1);
      }
    }
    if (pos_ < src_.size() && (is_name_char(src_[pos_]) || src_[pos_] == '.'))
      fail(t.line, t.column, "numeric literal", describe_rest(start));

    t.text = std::string(src_.substr(start, pos_ - start));
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (is_float) {
      t.kind = Tok::Float;
      auto [p, ec] = std::from_chars(first, last, t.float_value);
      if (ec != std::errc{} || p != last)
        fail(t.line, t.column, "float literal in double range", "'" + t.text + "'");
    } else {
      t.kind = Tok::Int;
      auto [p, ec] = std::from_chars(first, last, t.int_value);
      if (ec != std::errc{} || p != last)
        fail(t.line, t.column, "64-bit integer literal", "'" + t.text + "'");
    }
  }

  std::string describe_rest(std::size_t start) const {
    std::size_t end = start;
    while (end < src_.size() && (is_name_char(src_[end]) || src_[end] == '.' ||
                                 src_[end] == '+'))
      ++end;
    return quote_bytes(src_.substr(start, std::max<std::size_t>(end - start, 1)));
  }

  void lex_string(Token& t) {
    advance(1);
    std::string value;
    for (;;) {
      if (pos_ >= src_.size()) fail(t.line, t.column, "closing '\"'", "end of input");
      const char c = src_[pos_];
      if (c == '"') {
        advance(1);
        break;
      }
      if (c == '\n') fail(line_, col_, "closing '\"'", "newline");
      if (c == '\\') {
        if (pos_ + 1 >= src_.size()) fail(line_, col_, "escape sequence", "end of input");
        const char e = src_[pos_ + 1];
        switch (e) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default:
            fail(line_, col_, "one of \\\" \\\\ \\n \\t",
                 quote_bytes(src_.substr(pos_, 2)));
        }
        advance(2);
        continue;
      }
      value += c;
      advance(1);
    }
    if (!is_valid_utf8(value)) fail(t.line, t.column, "UTF-8 text", "invalid byte sequence");
    t.kind = Tok::String;
    t.text = std::move(value);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_scalar_keyword(std::string_view s) {
  return s == "int" || s == "float" || s == "bool" || s == "text";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program file() {
    Program p;
    std::set<std::string> record_names;
    while (is_name("record")) {
      const Token& at = peek(1);
      RecordDecl r = record_decl();
      if (!record_names.insert(r.name).second)
        fail_at(at, "fresh record name", "'" + r.name + "' (already declared)");
      p.records.push_back(std::move(r));
    }
    expect_name("program", "'record' or 'program'");
    expect(Tok::LBrace, "'{'");
    std::set<std::string> binders;
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::End) fail_at(peek(), "'}'");
      p.body.push_back(statement(binders));
    }
    advance();
    if (peek().kind != Tok::End) fail_at(peek(), "end of input");
    return p;
  }

  TypeTag standalone_tag() {
    TypeTag t = type_tag();
    if (peek().kind != Tok::End) fail_at(peek(), "end of input");
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail_at(const Token& t, std::string expected) {
    throw Failure{ParseError{t.line, t.column, std::move(expected), describe(t)}};
  }
  [[noreturn]] void fail_at(const Token& t, std::string expected, std::string found) {
    throw Failure{ParseError{t.line, t.column, std::move(expected), std::move(found)}};
  }

  bool is_name(std::string_view word) const {
    return peek().kind == Tok::Name && peek().text == word;
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) fail_at(peek(), std::string(what));
    return advance();
  }

  void expect_name(std::string_view word, std::string_view what) {
    if (!is_name(word)) fail_at(peek(), std::string(what));
    advance();
  }

  std::string name(std::string_view what) { return expect(Tok::Name, what).text; }

  RecordDecl record_decl() {
    advance();  // 'record'
    RecordDecl r;
    const Token& at = peek();
    r.name = name("record name");
    if (is_scalar_keyword(r.name) || r.name == "true" || r.name == "false")
      fail_at(at, "record name", "reserved word '" + r.name + "'");
    expect(Tok::LBrace, "'{'");
    std::set<std::string> seen;
    for (;;) {
      const Token& field_tok = peek();
      RecordField f;
      f.name = name("field name");
      if (!seen.insert(f.name).second)
        fail_at(field_tok, "fresh field name", "'" + f.name + "' (duplicate field)");
      expect(Tok::Colon, "':'");
      const Token& type_tok = peek();
      f.base = base_type();
      if (f.base.is_record())
        fail_at(type_tok, "scalar field type (int, float, bool, text)");
      r.fields.push_back(std::move(f));
      if (peek().kind == Tok::Comma) {
        advance();
        continue;
      }
      expect(Tok::RBrace, "',' or '}'");
      break;
    }
    return r;
  }

  BaseType base_type() {
    const std::string n = name("base type");
    if (n == "int") return BaseType::integer();
    if (n == "float") return BaseType::dbl();
    if (n == "bool") return BaseType::boolean();
    if (n == "text") return BaseType::text();
    return BaseType::rec(n);
  }

  TypeTag type_tag() {
    const Token& head = peek();
    const std::string n = name("type tag (string, list, set, hash)");
    expect(Tok::LAngle, "'<'");
    TypeTag t;
    if (n == "string" || n == "list" || n == "set") {
      BaseType b = base_type();
      t = n == "string" ? TypeTag::string_of(std::move(b))
          : n == "list" ? TypeTag::list_of(std::move(b))
                        : TypeTag::set_of(std::move(b));
    } else if (n == "hash") {
      t = TypeTag::hash_of({});
      std::set<std::string> seen;
      while (peek().kind != Tok::RAngle) {
        if (!t.fields.empty()) expect(Tok::Comma, "',' or '>'");
        const Token& field_tok = peek();
        std::string f = name("hash field name");
        if (!seen.insert(f).second)
          fail_at(field_tok, "fresh hash field name", "'" + f + "' (duplicate field)");
        expect(Tok::Colon, "':'");
        const Token& tag_tok = peek();
        TypeTag ft = type_tag();
        if (ft.kind != TypeTag::Kind::String)
          fail_at(tag_tok, "string<...> tag for hash field");
        t.fields.push_back({std::move(f), std::move(ft)});
      }
    } else {
      fail_at(head, "type tag (string, list, set, hash)");
    }
    expect(Tok::RAngle, "'>'");
    return t;
  }

  Command statement(std::set<std::string>& binders) {
    Command c;
    if (peek().kind == Tok::Name && peek(1).kind == Tok::Arrow) {
      const Token& b = advance();
      if (b.text == "true" || b.text == "false")
        fail_at(b, "binder name", "reserved word '" + b.text + "'");
      if (!binders.insert(b.text).second)
        fail_at(b, "fresh binder name", "'" + b.text + "' (already bound)");
      c.binder = b.text;
      advance();  // '<-'
    }
    const Token& op_tok = peek();
    if (op_tok.kind != Tok::Name) fail_at(op_tok, "command");
    auto op = opcode_from_name(op_tok.text);
    if (!op) fail_at(op_tok, "command");
    advance();
    c.op = *op;
    c.span = Span{op_tok.line, op_tok.column};

    const Signature sig = signature(c.op);
    for (int i = 0; i < sig.keys; ++i) c.keys.push_back(name("key"));
    if (c.op == Opcode::Declare) {
      expect(Tok::Colon, "':'");
      c.declared = type_tag();
    }
    for (int i = 0; i < sig.fields; ++i) c.field = name("hash field");
    for (int i = 0; i < sig.values; ++i) c.values.push_back(expr(0));
    return c;
  }

  Expr expr(int depth) {
    const Token& t = peek();
    if (depth > kMaxExprDepth) fail_at(t, "shallower expression nesting");
    switch (t.kind) {
      case Tok::Int: advance(); return Expr{IntLit{t.int_value}};
      case Tok::Float: advance(); return Expr{FloatLit{t.float_value}};
      case Tok::String: advance(); return Expr{TextLit{t.text}};
      case Tok::Name: break;
      default: fail_at(t, "value expression");
    }
    advance();
    if (t.text == "true") return Expr{BoolLit{true}};
    if (t.text == "false") return Expr{BoolLit{false}};
    if (peek().kind != Tok::LBrace) return Expr{Var{t.text}};
    advance();
    RecordLit r{t.text, {}};
    for (;;) {
      r.args.push_back(expr(depth + 1));
      if (peek().kind == Tok::Comma) {
        advance();
        continue;
      }
      expect(Tok::RBrace, "',' or '}'");
      break;
    }
    return Expr{std::move(r)};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string escape_text(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace

Result<Program, ParseError> parse_program(std::string_view source) {
  try {
    Parser p(Lexer(source).run());
    return p.file();
  } catch (const Failure& f) {
    return f.error;
  }
}

Result<TypeTag, ParseError> parse_type_tag(std::string_view source) {
  try {
    Parser p(Lexer(source).run());
    return p.standalone_tag();
  } catch (const Failure& f) {
    return f.error;
  }
}

std::string format_float_literal(double v) {
  std::string s = encode_double(v);
  if (s.find('.') == std::string::npos) s.insert(s.find('e'), ".0");
  return s;
}

std::string print_expr(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, FloatLit>) {
          return format_float_literal(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, TextLit>) {
          return escape_text(n.value);
        } else if constexpr (std::is_same_v<T, Var>) {
          return n.name;
        } else {
          std::string out = n.name + "{";
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            out += print_expr(n.args[i]);
          }
          return out + "}";
        }
      },
      e.node);
}

std::string print_command(const Command& c) {
  std::string out;
  if (c.binder) out += *c.binder + " <- ";
  out += opcode_name(c.op);
  for (const auto& k : c.keys) out += " " + k;
  if (c.declared) out += " : " + to_string(*c.declared);
  if (c.field) out += " " + *c.field;
  for (const auto& v : c.values) out += " " + print_expr(v);
  return out;
}

std::string print_record(const RecordDecl& r) {
  std::string out = "record " + r.name + " { ";
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    if (i) out += ", ";
    out += r.fields[i].name + ": " + to_string(r.fields[i].base);
  }
  return out + " }";
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& r : p.records) out += print_record(r) + "\n";
  out += "program {\n";
  for (const auto& c : p.body) out += "  " + print_command(c) + "\n";
  out += "}\n";
  return out;
}

}  // namespace edis
