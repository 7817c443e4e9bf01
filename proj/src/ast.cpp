#include "edis/ast.hpp"

#include <array>
#include <utility>

namespace edis {
namespace {

struct OpcodeInfo {
  Opcode op;
  std::string_view name;
  Signature sig;
};

constexpr std::array<OpcodeInfo, 15> kOpcodes{{
    {Opcode::Ping, "ping", {0, 0, 0}},
    {Opcode::Set, "set", {1, 0, 1}},
    {Opcode::SetNX, "setnx", {1, 0, 1}},
    {Opcode::Get, "get", {1, 0, 0}},
    {Opcode::Del, "del", {1, 0, 0}},
    {Opcode::Incr, "incr", {1, 0, 0}},
    {Opcode::IncrByFloat, "incrbyfloat", {1, 0, 1}},
    {Opcode::LPush, "lpush", {1, 0, 1}},
    {Opcode::LLen, "llen", {1, 0, 0}},
    {Opcode::RPop, "rpop", {1, 0, 0}},
    {Opcode::SAdd, "sadd", {1, 0, 1}},
    {Opcode::SInter, "sinter", {2, 0, 0}},
    {Opcode::HSet, "hset", {1, 1, 1}},
    {Opcode::HGet, "hget", {1, 1, 0}},
    {Opcode::Declare, "declare", {1, 0, 0}},
}};

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (const auto* v = std::get_if<Var>(&e.node)) {
    out.insert(v->name);
  } else if (const auto* r = std::get_if<RecordLit>(&e.node)) {
    for (const auto& a : r->args) collect_vars(a, out);
  }
}

}  // namespace

std::string_view opcode_name(Opcode op) {
  for (const auto& info : kOpcodes)
    if (info.op == op) return info.name;
  return "?";
}

std::optional<Opcode> opcode_from_name(std::string_view name) {
  for (const auto& info : kOpcodes)
    if (info.name == name) return info.op;
  return std::nullopt;
}

Signature signature(Opcode op) {
  for (const auto& info : kOpcodes)
    if (info.op == op) return info.sig;
  return {};
}

std::set<std::string> expr_free_vars(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

const RecordField* RecordDecl::find(std::string_view field) const {
  for (const auto& f : fields)
    if (f.name == field) return &f;
  return nullptr;
}

const RecordDecl* Program::find_record(std::string_view name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

bool is_symbol(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  for (char c : s.substr(1))
    if (!alpha(c) && !digit(c) && c != '-') return false;
  return true;
}

std::string to_string(const BaseType& b) {
  switch (b.kind) {
    case BaseType::Kind::Integer: return "int";
    case BaseType::Kind::Double: return "float";
    case BaseType::Kind::Boolean: return "bool";
    case BaseType::Kind::Text: return "text";
    case BaseType::Kind::Record: return b.record;
  }
  return "?";
}

std::string to_string(const TypeTag& t) {
  switch (t.kind) {
    case TypeTag::Kind::String: return "string<" + to_string(t.base) + ">";
    case TypeTag::Kind::List: return "list<" + to_string(t.base) + ">";
    case TypeTag::Kind::Set: return "set<" + to_string(t.base) + ">";
    case TypeTag::Kind::Hash: {
      std::string out = "hash<";
      for (std::size_t i = 0; i < t.fields.size(); ++i) {
        if (i) out += ", ";
        out += t.fields[i].key + ": " + to_string(t.fields[i].tag);
      }
      return out + ">";
    }
  }
  return "?";
}

}  // namespace edis
