#pragma once

#include <string>
#include <string_view>

namespace edis {

/// Strict UTF-8 check: rejects overlong forms, surrogates and code points
/// above U+10FFFF.
bool is_valid_utf8(std::string_view s);

/// Printable rendering of arbitrary bytes for diagnostics, truncated to
/// `limit` input bytes.
std::string quote_bytes(std::string_view s, std::size_t limit = 64);

}  // namespace edis
