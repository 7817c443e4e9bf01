#include "edis/resp.hpp"

#include <charconv>

namespace edis {
namespace {

constexpr std::int64_t kMaxBulkLength = 512LL * 1024 * 1024;
constexpr std::int64_t kMaxArrayLength = 1 << 24;
constexpr int kMaxDepth = 32;

struct Incomplete {};

class Cursor {
 public:
  Cursor(std::string_view buf, std::size_t pos) : buf_(buf), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  char byte() {
    if (pos_ >= buf_.size()) throw Incomplete{};
    return buf_[pos_++];
  }

  // A line up to CRLF, CRLF consumed.
  std::string_view line() {
    const std::size_t cr = buf_.find('\r', pos_);
    const std::size_t lf = buf_.find('\n', pos_);
    if (lf != std::string_view::npos && (cr == std::string_view::npos || lf < cr))
      throw ProtocolError("bare LF in line");
    if (cr == std::string_view::npos) throw Incomplete{};
    if (cr + 1 >= buf_.size()) throw Incomplete{};
    if (buf_[cr + 1] != '\n') throw ProtocolError("CR not followed by LF");
    std::string_view out = buf_.substr(pos_, cr - pos_);
    pos_ = cr + 2;
    return out;
  }

  std::string_view take(std::size_t n) {
    if (buf_.size() - pos_ < n) throw Incomplete{};
    std::string_view out = buf_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::string_view buf_;
  std::size_t pos_;
};

std::int64_t parse_int_line(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) throw ProtocolError("empty integer");
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ProtocolError("malformed integer '" + std::string(s) + "'");
  return v;
}

Reply parse_reply(Cursor& in, int depth) {
  if (depth > kMaxDepth) throw ProtocolError("reply nesting too deep");
  const char type = in.byte();
  switch (type) {
    case '+': return Reply::status(std::string(in.line()));
    case '-': return Reply::error(std::string(in.line()));
    case ':': return Reply::integer_reply(parse_int_line(in.line()));
    case '$': {
      const std::int64_t len = parse_int_line(in.line());
      if (len == -1) return Reply::nil();
      if (len < 0 || len > kMaxBulkLength) throw ProtocolError("bad bulk length");
      std::string body(in.take(static_cast<std::size_t>(len)));
      if (in.take(2) != "\r\n") throw ProtocolError("bulk string not terminated by CRLF");
      return Reply::bulk(std::move(body));
    }
    case '*': {
      const std::int64_t len = parse_int_line(in.line());
      if (len == -1) return Reply::nil();
      if (len < 0 || len > kMaxArrayLength) throw ProtocolError("bad array length");
      std::vector<Reply> items;
      for (std::int64_t i = 0; i < len; ++i) items.push_back(parse_reply(in, depth + 1));
      return Reply::array(std::move(items));
    }
    default:
      throw ProtocolError(std::string("unknown reply type byte 0x") +
                          "0123456789abcdef"[(static_cast<unsigned char>(type) >> 4) & 0xF] +
                          "0123456789abcdef"[static_cast<unsigned char>(type) & 0xF]);
  }
}

void append_bulk(std::string& out, std::string_view s) {
  out += '$';
  out += std::to_string(s.size());
  out += "\r\n";
  out += s;
  out += "\r\n";
}

// Simple strings and errors cannot carry line breaks.
std::string one_line(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c == '\r' || c == '\n') c = ' ';
  return out;
}

}  // namespace

std::string resp_encode(const WireCommand& cmd) {
  std::string out = "*" + std::to_string(cmd.size()) + "\r\n";
  for (const auto& arg : cmd) append_bulk(out, arg);
  return out;
}

std::string resp_encode(const Reply& reply) {
  switch (reply.kind) {
    case Reply::Kind::Status: return "+" + one_line(reply.str) + "\r\n";
    case Reply::Kind::Error: return "-" + one_line(reply.str) + "\r\n";
    case Reply::Kind::Integer: return ":" + std::to_string(reply.integer) + "\r\n";
    case Reply::Kind::Nil: return "$-1\r\n";
    case Reply::Kind::Bulk: {
      std::string out;
      append_bulk(out, reply.str);
      return out;
    }
    case Reply::Kind::Array: {
      std::string out = "*" + std::to_string(reply.elements.size()) + "\r\n";
      for (const auto& e : reply.elements) out += resp_encode(e);
      return out;
    }
  }
  return {};
}

std::optional<Reply> RespDecoder::next() {
  Cursor in(buf_, pos_);
  try {
    Reply r = parse_reply(in, 0);
    pos_ = in.pos();
    if (pos_ == buf_.size()) {
      buf_.clear();
      pos_ = 0;
    } else if (pos_ > 4096 && pos_ * 2 > buf_.size()) {
      buf_.erase(0, pos_);
      pos_ = 0;
    }
    return r;
  } catch (const Incomplete&) {
    return std::nullopt;
  }
}

Reply resp_decode(std::string_view bytes) {
  RespDecoder d;
  d.feed(bytes);
  auto r = d.next();
  if (!r) throw ProtocolError("truncated reply");
  if (d.pending() != 0) throw ProtocolError("trailing bytes after reply");
  return std::move(*r);
}

std::optional<WireCommand> as_wire_command(const Reply& request) {
  if (request.kind != Reply::Kind::Array || request.elements.empty()) return std::nullopt;
  WireCommand out;
  for (const auto& e : request.elements) {
    if (e.kind != Reply::Kind::Bulk) return std::nullopt;
    out.push_back(e.str);
  }
  return out;
}

}  // namespace edis
