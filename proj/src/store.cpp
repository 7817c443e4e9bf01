#include "edis/store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "edis/codec.hpp"

namespace edis {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Reply wrong_type() { return Reply::error(std::string(kWrongType)); }

// Strict signed decimal as the server accepts it for INCR: no sign other
// than a leading '-', no leading zeros, no "-0", no whitespace.
std::optional<std::int64_t> parse_strict_integer(std::string_view s) {
  if (s.empty() || s.size() > 20) return std::nullopt;
  if (s == "0") return 0;
  const bool negative = s.front() == '-';
  std::string_view digits = negative ? s.substr(1) : s;
  if (digits.empty() || digits.front() < '1' || digits.front() > '9') return std::nullopt;
  std::uint64_t acc = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
    if (acc > (std::numeric_limits<std::uint64_t>::max() - d) / 10) return std::nullopt;
    acc = acc * 10 + d;
  }
  constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  if (negative) {
    if (acc > kMax + 1) return std::nullopt;
    return acc == kMax + 1 ? std::numeric_limits<std::int64_t>::min()
                           : -static_cast<std::int64_t>(acc);
  }
  if (acc > kMax) return std::nullopt;
  return static_cast<std::int64_t>(acc);
}

std::optional<double> parse_float(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::string to_string(const Reply& r) {
  switch (r.kind) {
    case Reply::Kind::Status: return r.str;
    case Reply::Kind::Error: return "(error) " + r.str;
    case Reply::Kind::Integer: return "(integer) " + std::to_string(r.integer);
    case Reply::Kind::Bulk: return "\"" + r.str + "\"";
    case Reply::Kind::Nil: return "(nil)";
    case Reply::Kind::Array: {
      if (r.elements.empty()) return "(empty array)";
      std::string out;
      for (std::size_t i = 0; i < r.elements.size(); ++i) {
        if (i) out += "\n";
        out += std::to_string(i + 1) + ") " + to_string(r.elements[i]);
      }
      return out;
    }
  }
  return "?";
}

Reply Store::exec(const WireCommand& cmd) {
  if (cmd.empty()) return Reply::error("ERR empty command");
  const std::string name = upper(cmd[0]);

  struct Entry {
    std::string_view name;
    std::size_t min_args;
    std::size_t max_args;
    Reply (Store::*fn)(const WireCommand&);
  };
  static constexpr Entry kTable[] = {
      {"PING", 1, 2, &Store::ping},     {"SET", 3, 3, &Store::set},
      {"SETNX", 3, 3, &Store::setnx},   {"GET", 2, 2, &Store::get},
      {"DEL", 2, 2, &Store::del},       {"INCR", 2, 2, &Store::incr},
      {"INCRBYFLOAT", 3, 3, &Store::incrbyfloat},
      {"LPUSH", 3, 3, &Store::lpush},   {"LLEN", 2, 2, &Store::llen},
      {"RPOP", 2, 2, &Store::rpop},     {"SADD", 3, 3, &Store::sadd},
      {"SINTER", 3, 3, &Store::sinter}, {"HSET", 4, 4, &Store::hset},
      {"HGET", 3, 3, &Store::hget},
  };
  for (const auto& e : kTable) {
    if (e.name != name) continue;
    if (cmd.size() < e.min_args || cmd.size() > e.max_args)
      return Reply::error("ERR wrong number of arguments for '" + lower(name) + "' command");
    return (this->*e.fn)(cmd);
  }
  return Reply::error("ERR unknown command '" + cmd[0] + "'");
}

Reply Store::ping(const WireCommand& cmd) {
  if (cmd.size() == 2) return Reply::bulk(cmd[1]);
  return Reply::status("PONG");
}

Reply Store::set(const WireCommand& cmd) {
  data_.insert_or_assign(cmd[1], StoreValue{cmd[2]});
  return Reply::status("OK");
}

Reply Store::setnx(const WireCommand& cmd) {
  if (data_.count(cmd[1])) return Reply::integer_reply(0);
  data_.emplace(cmd[1], StoreValue{cmd[2]});
  return Reply::integer_reply(1);
}

Reply Store::get(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  if (it == data_.end()) return Reply::nil();
  if (const auto* s = std::get_if<std::string>(&it->second)) return Reply::bulk(*s);
  return wrong_type();
}

Reply Store::del(const WireCommand& cmd) {
  return Reply::integer_reply(data_.erase(cmd[1]) ? 1 : 0);
}

Reply Store::incr(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  std::int64_t current = 0;
  if (it != data_.end()) {
    const auto* s = std::get_if<std::string>(&it->second);
    if (!s) return wrong_type();
    auto parsed = parse_strict_integer(*s);
    if (!parsed) return Reply::error(std::string(kNotInteger));
    current = *parsed;
  }
  if (current == std::numeric_limits<std::int64_t>::max())
    return Reply::error(std::string(kOverflow));
  const std::int64_t next = current + 1;
  data_.insert_or_assign(cmd[1], StoreValue{std::to_string(next)});
  return Reply::integer_reply(next);
}

Reply Store::incrbyfloat(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  double current = 0;
  if (it != data_.end()) {
    const auto* s = std::get_if<std::string>(&it->second);
    if (!s) return wrong_type();
    auto parsed = parse_float(*s);
    if (!parsed) return Reply::error(std::string(kNotFloat));
    current = *parsed;
  }
  auto increment = parse_float(cmd[2]);
  if (!increment) return Reply::error(std::string(kNotFloat));
  const double next = current + *increment;
  if (!std::isfinite(next)) return Reply::error(std::string(kNanOrInf));
  std::string encoded = encode_double(next);
  data_.insert_or_assign(cmd[1], StoreValue{encoded});
  return Reply::bulk(std::move(encoded));
}

Reply Store::lpush(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  if (it == data_.end()) it = data_.emplace(cmd[1], StoreValue{ListValue{}}).first;
  auto* list = std::get_if<ListValue>(&it->second);
  if (!list) return wrong_type();
  list->push_front(cmd[2]);
  return Reply::integer_reply(static_cast<std::int64_t>(list->size()));
}

Reply Store::llen(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  if (it == data_.end()) return Reply::integer_reply(0);
  const auto* list = std::get_if<ListValue>(&it->second);
  if (!list) return wrong_type();
  return Reply::integer_reply(static_cast<std::int64_t>(list->size()));
}

Reply Store::rpop(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  if (it == data_.end()) return Reply::nil();
  auto* list = std::get_if<ListValue>(&it->second);
  if (!list) return wrong_type();
  std::string out = std::move(list->back());
  list->pop_back();
  if (list->empty()) data_.erase(it);
  return Reply::bulk(std::move(out));
}

Reply Store::sadd(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  if (it == data_.end()) it = data_.emplace(cmd[1], StoreValue{SetValue{}}).first;
  auto* set = std::get_if<SetValue>(&it->second);
  if (!set) return wrong_type();
  return Reply::integer_reply(set->insert(cmd[2]).second ? 1 : 0);
}

Reply Store::sinter(const WireCommand& cmd) {
  static const SetValue kEmpty;
  const SetValue* operands[2] = {&kEmpty, &kEmpty};
  for (int i = 0; i < 2; ++i) {
    auto it = data_.find(cmd[1 + i]);
    if (it == data_.end()) continue;
    const auto* set = std::get_if<SetValue>(&it->second);
    if (!set) return wrong_type();
    operands[i] = set;
  }
  std::vector<Reply> out;
  // std::set iterates in bytewise order, so the reply is already sorted.
  for (const auto& m : *operands[0])
    if (operands[1]->count(m)) out.push_back(Reply::bulk(m));
  return Reply::array(std::move(out));
}

Reply Store::hset(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  if (it == data_.end()) it = data_.emplace(cmd[1], StoreValue{HashValue{}}).first;
  auto* hash = std::get_if<HashValue>(&it->second);
  if (!hash) return wrong_type();
  const bool created = hash->insert_or_assign(cmd[2], cmd[3]).second;
  return Reply::integer_reply(created ? 1 : 0);
}

Reply Store::hget(const WireCommand& cmd) {
  auto it = data_.find(cmd[1]);
  if (it == data_.end()) return Reply::nil();
  const auto* hash = std::get_if<HashValue>(&it->second);
  if (!hash) return wrong_type();
  auto f = hash->find(cmd[2]);
  if (f == hash->end()) return Reply::nil();
  return Reply::bulk(f->second);
}

Snapshot Store::snapshot() const {
  Snapshot out;
  out.reserve(data_.size());
  for (const auto& [k, v] : data_) out.push_back({k, v});
  return out;
}

std::string snapshot_json(const Snapshot& s) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& e : s) {
    nlohmann::ordered_json item;
    item["key"] = e.key;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) {
            item["type"] = "string";
            item["value"] = v;
          } else if constexpr (std::is_same_v<T, ListValue>) {
            item["type"] = "list";
            item["value"] = nlohmann::ordered_json(std::vector<std::string>(v.begin(), v.end()));
          } else if constexpr (std::is_same_v<T, SetValue>) {
            item["type"] = "set";
            item["value"] = nlohmann::ordered_json(std::vector<std::string>(v.begin(), v.end()));
          } else {
            item["type"] = "hash";
            nlohmann::ordered_json fields = nlohmann::ordered_json::object();
            for (const auto& [f, x] : v) fields[f] = x;
            item["value"] = std::move(fields);
          }
        },
        e.value);
    out.push_back(std::move(item));
  }
  return out.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

}  // namespace edis
