#pragma once

// RESP2 framing. Requests are arrays of bulk strings; replies are simple
// strings (+), errors (-), integers (:), bulk strings ($, with $-1 as nil)
// and arrays (*).

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "edis/store.hpp"

namespace edis {

/// Malformed framing. Fatal for the connection it came from.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string resp_encode(const WireCommand& cmd);
std::string resp_encode(const Reply& reply);

/// Incremental reply decoder. Bytes may arrive in arbitrary pieces; a reply
/// is returned only once it is complete, and exactly its bytes are consumed.
class RespDecoder {
 public:
  void feed(std::string_view bytes) { buf_.append(bytes); }

  /// Next complete reply, or nullopt if more bytes are needed. Throws
  /// ProtocolError on malformed input.
  std::optional<Reply> next();

  /// Bytes received but not yet consumed.
  std::size_t pending() const { return buf_.size() - pos_; }

 private:
  std::string buf_;
  std::size_t pos_ = 0;
};

/// Decodes exactly one reply occupying all of `bytes`.
Reply resp_decode(std::string_view bytes);

/// Interprets a decoded request (array of bulk strings) as a command.
std::optional<WireCommand> as_wire_command(const Reply& request);

}  // namespace edis
