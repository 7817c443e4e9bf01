#include "edis/backend.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace edis {
namespace {

std::string errno_text(int err) { return std::strerror(err); }

int wait_for(int fd, short events, std::chrono::milliseconds timeout) {
  pollfd p{fd, events, 0};
  for (;;) {
    const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc < 0 && errno == EINTR) continue;
    return rc;
  }
}

}  // namespace

std::optional<Address> parse_address(std::string_view text) {
  Address a;
  const auto colon = text.rfind(':');
  std::string_view host = text;
  if (colon != std::string_view::npos) {
    host = text.substr(0, colon);
    std::string_view port = text.substr(colon + 1);
    int p = 0;
    auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), p);
    if (port.empty() || ec != std::errc{} || end != port.data() + port.size() || p <= 0 ||
        p > 65535)
      return std::nullopt;
    a.port = p;
  }
  if (!host.empty()) a.host = std::string(host);
  return a;
}

std::unique_ptr<RespBackend> RespBackend::connect(const std::string& host, int port,
                                                  std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port_s = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), port_s.c_str(), &hints, &res); rc != 0)
    throw ConnectionError("cannot resolve " + host + ": " + gai_strerror(rc));

  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) {
      last_error = errno_text(errno);
      continue;
    }
    const int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc < 0 && errno == EINPROGRESS) {
      if (wait_for(fd, POLLOUT, timeout) <= 0) {
        last_error = "connect timed out";
        ::close(fd);
        continue;
      }
      int err = 0;
      socklen_t len = sizeof err;
      ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
      rc = err == 0 ? 0 : -1;
      errno = err;
    }
    if (rc < 0) {
      last_error = errno_text(errno);
      ::close(fd);
      continue;
    }
    ::fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    ::freeaddrinfo(res);
    return std::unique_ptr<RespBackend>(new RespBackend(fd, timeout));
  }
  ::freeaddrinfo(res);
  throw ConnectionError("cannot connect to " + host + ":" + port_s + ": " + last_error);
}

RespBackend::~RespBackend() {
  if (fd_ >= 0) ::close(fd_);
}

Reply RespBackend::send(const WireCommand& cmd) {
  if (fd_ < 0) throw ConnectionError("connection is closed");
  const std::string out = resp_encode(cmd);
  std::size_t sent = 0;
  while (sent < out.size()) {
    const ssize_t n = ::send(fd_, out.data() + sent, out.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError("send failed: " + errno_text(errno));
    }
    sent += static_cast<std::size_t>(n);
  }

  char buf[4096];
  for (;;) {
    try {
      if (auto r = decoder_.next()) return std::move(*r);
    } catch (const ProtocolError& e) {
      ::close(fd_);
      fd_ = -1;
      throw ConnectionError(std::string("protocol error: ") + e.what());
    }
    const int ready = wait_for(fd_, POLLIN, timeout_);
    if (ready == 0) throw ConnectionError("timed out waiting for reply");
    if (ready < 0) throw ConnectionError("poll failed: " + errno_text(errno));
    const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n == 0) throw ConnectionError("connection closed by peer");
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError("recv failed: " + errno_text(errno));
    }
    decoder_.feed(std::string_view(buf, static_cast<std::size_t>(n)));
  }
}

std::string display(const RunValue& v) {
  switch (v.type.kind) {
    case ResultType::Kind::Status: return v.status;
    case ResultType::Kind::Unit: return "()";
    case ResultType::Kind::Integer:
    case ResultType::Kind::Double:
    case ResultType::Kind::Boolean: return v.scalar ? display(*v.scalar) : "?";
    case ResultType::Kind::Maybe: return v.scalar ? "Just " + display(*v.scalar) : "Nothing";
    case ResultType::Kind::ListResult: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += display(v.items[i]);
      }
      return out + "]";
    }
  }
  return "?";
}

TypedValue eval_expr(const Expr& e, const ValueEnv& env, const Program& records) {
  return std::visit(
      [&](const auto& n) -> TypedValue {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return TypedValue::integer(n.value);
        } else if constexpr (std::is_same_v<T, FloatLit>) {
          return TypedValue::dbl(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return TypedValue::boolean(n.value);
        } else if constexpr (std::is_same_v<T, TextLit>) {
          return TypedValue::text(n.value);
        } else if constexpr (std::is_same_v<T, Var>) {
          return env.at(n.name);
        } else {
          const RecordDecl* decl = records.find_record(n.name);
          std::vector<FieldValue> fields;
          for (std::size_t i = 0; i < n.args.size(); ++i)
            fields.push_back({decl->fields.at(i).name, eval_expr(n.args[i], env, records)});
          return TypedValue::record(n.name, std::move(fields));
        }
      },
      e.node);
}

std::optional<WireCommand> to_wire(const Command& c, const ValueEnv& env,
                                   const Program& records) {
  if (c.op == Opcode::Declare) return std::nullopt;
  std::string name(opcode_name(c.op));
  for (auto& ch : name) ch = static_cast<char>(ch - ('a' <= ch && ch <= 'z' ? 32 : 0));
  WireCommand out{std::move(name)};
  for (const auto& k : c.keys) out.push_back(k);
  if (c.field) out.push_back(*c.field);
  for (const auto& v : c.values) out.push_back(encode(eval_expr(v, env, records)));
  return out;
}

namespace {

class Interpreter {
 public:
  Interpreter(const Program& p, const Command& c) : p_(p), c_(c) {}

  RunOutcome interpret(const Reply& reply, const ResultType& type) const {
    if (reply.is_error()) return failure(RuntimeFailure::Kind::ErrorReply, reply.str);
    RunValue v{type, {}, std::nullopt, {}};
    switch (type.kind) {
      case ResultType::Kind::Status:
        if (reply.kind != Reply::Kind::Status) return unexpected(reply);
        v.status = reply.str;
        return v;
      case ResultType::Kind::Integer:
        if (reply.kind != Reply::Kind::Integer) return unexpected(reply);
        v.scalar = TypedValue::integer(reply.integer);
        return v;
      case ResultType::Kind::Boolean:
        if (reply.kind != Reply::Kind::Integer || (reply.integer != 0 && reply.integer != 1))
          return unexpected(reply);
        v.scalar = TypedValue::boolean(reply.integer == 1);
        return v;
      case ResultType::Kind::Double: {
        if (reply.kind != Reply::Kind::Bulk) return unexpected(reply);
        auto d = decode(reply.str, BaseType::dbl(), p_.records);
        if (!d) return decode_failure(d.error());
        v.scalar = std::move(*d);
        return v;
      }
      case ResultType::Kind::Maybe: {
        if (reply.kind == Reply::Kind::Nil) return v;
        if (reply.kind != Reply::Kind::Bulk) return unexpected(reply);
        auto d = decode(reply.str, type.base, p_.records);
        if (!d) return decode_failure(d.error());
        v.scalar = std::move(*d);
        return v;
      }
      case ResultType::Kind::ListResult:
        if (reply.kind != Reply::Kind::Array) return unexpected(reply);
        for (const auto& e : reply.elements) {
          if (e.kind != Reply::Kind::Bulk) return unexpected(reply);
          auto d = decode(e.str, type.base, p_.records);
          if (!d) return decode_failure(d.error());
          v.items.push_back(std::move(*d));
        }
        return v;
      case ResultType::Kind::Unit:
        return v;
    }
    return unexpected(reply);
  }

 private:
  RunOutcome failure(RuntimeFailure::Kind kind, std::string message) const {
    return RuntimeFailure{kind, c_.span, c_.op, std::move(message)};
  }
  RunOutcome decode_failure(const DecodeError& e) const {
    return failure(RuntimeFailure::Kind::Decode, "DECODE " + e.message());
  }
  RunOutcome unexpected(const Reply& r) const {
    return failure(RuntimeFailure::Kind::UnexpectedReply,
                   "unexpected reply to " + std::string(opcode_name(c_.op)) + ": " +
                       to_string(r));
  }

  const Program& p_;
  const Command& c_;
};

}  // namespace

RunOutcome run_program(const Program& p, const CheckOk& report, Backend& backend) {
  ValueEnv env;
  RunValue last{ResultType::unit(), {}, std::nullopt, {}};
  for (std::size_t i = 0; i < p.body.size(); ++i) {
    const Command& c = p.body[i];
    const ResultType& type = report.steps.at(i);
    auto wire = to_wire(c, env, p);
    if (!wire) {
      last = RunValue{type, {}, std::nullopt, {}};
    } else {
      auto outcome = Interpreter(p, c).interpret(backend.send(*wire), type);
      if (!outcome) return outcome;
      last = std::move(*outcome);
    }
    // Only scalar results can flow into later expressions.
    if (c.binder && last.scalar &&
        (type.kind == ResultType::Kind::Integer || type.kind == ResultType::Kind::Double ||
         type.kind == ResultType::Kind::Boolean))
      env.insert_or_assign(*c.binder, *last.scalar);
  }
  return last;
}

}  // namespace edis
