#pragma once

// In-memory simulator of the store's dynamic semantics for the supported
// command subset. Type violations are reported the same way the real server
// does, as error replies starting with "WRONGTYPE".

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace edis {

/// One request: command name followed by its byte-string arguments.
using WireCommand = std::vector<std::string>;

struct Reply {
  enum class Kind { Status, Error, Integer, Bulk, Nil, Array };

  Kind kind = Kind::Nil;
  std::string str;            // Status / Error / Bulk
  std::int64_t integer = 0;   // Integer
  std::vector<Reply> elements;  // Array

  static Reply status(std::string s) { return {Kind::Status, std::move(s), 0, {}}; }
  static Reply error(std::string s) { return {Kind::Error, std::move(s), 0, {}}; }
  static Reply integer_reply(std::int64_t n) { return {Kind::Integer, {}, n, {}}; }
  static Reply bulk(std::string s) { return {Kind::Bulk, std::move(s), 0, {}}; }
  static Reply nil() { return {Kind::Nil, {}, 0, {}}; }
  static Reply array(std::vector<Reply> xs) { return {Kind::Array, {}, 0, std::move(xs)}; }

  bool is_error() const { return kind == Kind::Error; }

  friend bool operator==(const Reply&, const Reply&) = default;
};

/// redis-cli style rendering: "OK", "(integer) 3", "\"a\"", "(nil)", ...
std::string to_string(const Reply& r);

inline constexpr std::string_view kWrongType =
    "WRONGTYPE Operation against a key holding the wrong kind of value";
inline constexpr std::string_view kNotInteger = "ERR value is not an integer or out of range";
inline constexpr std::string_view kNotFloat = "ERR value is not a valid float";
inline constexpr std::string_view kOverflow = "ERR increment or decrement would overflow";
inline constexpr std::string_view kNanOrInf = "ERR increment would produce NaN or Infinity";

/// List elements run left (head) to right.
using ListValue = std::deque<std::string>;
using SetValue = std::set<std::string>;
using HashValue = std::map<std::string, std::string>;
using StoreValue = std::variant<std::string, ListValue, SetValue, HashValue>;

/// Sorted, typed dump of the store contents.
struct SnapshotEntry {
  std::string key;
  StoreValue value;

  friend bool operator==(const SnapshotEntry&, const SnapshotEntry&) = default;
};
using Snapshot = std::vector<SnapshotEntry>;

/// JSON rendering of a snapshot:
/// [{"key":"a","type":"string","value":"1"}, {"key":"q","type":"list","value":[...]}]
std::string snapshot_json(const Snapshot& s);

class Store {
 public:
  /// Executes one command. Never throws; every failure is an error reply.
  Reply exec(const WireCommand& cmd);

  Snapshot snapshot() const;
  void reset() { data_.clear(); }

  bool contains(std::string_view key) const { return data_.find(key) != data_.end(); }
  std::size_t size() const { return data_.size(); }

  friend bool operator==(const Store&, const Store&) = default;

 private:
  Reply ping(const WireCommand& cmd);
  Reply set(const WireCommand& cmd);
  Reply setnx(const WireCommand& cmd);
  Reply get(const WireCommand& cmd);
  Reply del(const WireCommand& cmd);
  Reply incr(const WireCommand& cmd);
  Reply incrbyfloat(const WireCommand& cmd);
  Reply lpush(const WireCommand& cmd);
  Reply llen(const WireCommand& cmd);
  Reply rpop(const WireCommand& cmd);
  Reply sadd(const WireCommand& cmd);
  Reply sinter(const WireCommand& cmd);
  Reply hset(const WireCommand& cmd);
  Reply hget(const WireCommand& cmd);

  std::map<std::string, StoreValue, std::less<>> data_;
};

}  // namespace edis
