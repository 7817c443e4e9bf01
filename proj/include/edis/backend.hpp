#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edis/ast.hpp"
#include "edis/checker.hpp"
#include "edis/codec.hpp"
#include "edis/resp.hpp"
#include "edis/result.hpp"
#include "edis/store.hpp"

namespace edis {

/// Something that answers wire commands, one at a time.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual Reply send(const WireCommand& cmd) = 0;
};

class SimulatorBackend final : public Backend {
 public:
  Reply send(const WireCommand& cmd) override {
    ++sent_;
    return store_.exec(cmd);
  }

  Store& store() { return store_; }
  const Store& store() const { return store_; }
  std::size_t commands_sent() const { return sent_; }

 private:
  Store store_;
  std::size_t sent_ = 0;
};

/// Socket-level failure talking to a live server: refused connection,
/// timeout, reset, or malformed framing.
class ConnectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Blocking RESP2 client over TCP. Exactly one request is in flight at a
/// time; any socket or framing error is fatal for the connection.
class RespBackend final : public Backend {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{5000};

  /// Throws ConnectionError.
  static std::unique_ptr<RespBackend> connect(const std::string& host, int port,
                                              std::chrono::milliseconds timeout = kDefaultTimeout);

  ~RespBackend() override;
  RespBackend(const RespBackend&) = delete;
  RespBackend& operator=(const RespBackend&) = delete;

  /// Throws ConnectionError.
  Reply send(const WireCommand& cmd) override;

 private:
  RespBackend(int fd, std::chrono::milliseconds timeout) : fd_(fd), timeout_(timeout) {}

  int fd_ = -1;
  std::chrono::milliseconds timeout_;
  RespDecoder decoder_;
};

/// "host:port", "host" (port 6379) or ":port" (localhost).
struct Address {
  std::string host = "127.0.0.1";
  int port = 6379;
};
std::optional<Address> parse_address(std::string_view text);

/// Decoded value of a successful command. Integer, Double and Boolean
/// results and present Maybe values live in `scalar`; ListResult values in
/// `items`.
struct RunValue {
  ResultType type;
  std::string status;
  std::optional<TypedValue> scalar;
  std::vector<TypedValue> items;

  friend bool operator==(const RunValue&, const RunValue&) = default;
};

/// "PONG", "3", "Just Message{body: \"hello\", id: 1}", "Nothing", "[...]".
std::string display(const RunValue& v);

struct RuntimeFailure {
  enum class Kind { ErrorReply, Decode, UnexpectedReply };

  Kind kind = Kind::ErrorReply;
  Span span;
  Opcode op = Opcode::Ping;
  /// Error reply text verbatim for ErrorReply; prefixed "DECODE " for
  /// decode failures.
  std::string message;

  friend bool operator==(const RuntimeFailure&, const RuntimeFailure&) = default;
};

using RunOutcome = Result<RunValue, RuntimeFailure>;

/// Scalar values bound by earlier commands, by binder name.
using ValueEnv = std::map<std::string, TypedValue, std::less<>>;

/// Evaluates a value expression to the value it denotes.
TypedValue eval_expr(const Expr& e, const ValueEnv& env, const Program& records);

/// The request a command sends; nullopt for commands that only act on the
/// dictionary (declare).
std::optional<WireCommand> to_wire(const Command& c, const ValueEnv& env,
                                   const Program& records);

/// Executes an accepted program command by command. Stops at the first error
/// reply or decode failure. ConnectionError propagates.
RunOutcome run_program(const Program& p, const CheckOk& report, Backend& backend);

}  // namespace edis
