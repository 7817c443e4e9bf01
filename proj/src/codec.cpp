#include "edis/codec.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "edis/text.hpp"

namespace edis {

TypedValue TypedValue::integer(std::int64_t v) { return {BaseType::integer(), v}; }
TypedValue TypedValue::dbl(double v) { return {BaseType::dbl(), v}; }
TypedValue TypedValue::boolean(bool v) { return {BaseType::boolean(), v}; }
TypedValue TypedValue::text(std::string v) { return {BaseType::text(), std::move(v)}; }
TypedValue TypedValue::record(std::string name, std::vector<FieldValue> fields) {
  return {BaseType::rec(std::move(name)), std::move(fields)};
}

bool operator==(const TypedValue& a, const TypedValue& b) {
  return a.base == b.base && a.payload == b.payload;
}

std::string DecodeError::message() const {
  return "cannot decode " + quote_bytes(bytes) + " as " + to_string(expected);
}

namespace {

void append_json_string(std::string& out, std::string_view s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

void append_encoded(std::string& out, const TypedValue& v, bool in_json) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          out += encode_integer(p);
        } else if constexpr (std::is_same_v<T, double>) {
          out += encode_double(p);
        } else if constexpr (std::is_same_v<T, bool>) {
          out += p ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (in_json)
            append_json_string(out, p);
          else
            out += p;
        } else {
          out += '{';
          for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) out += ',';
            append_json_string(out, p[i].name);
            out += ':';
            append_encoded(out, p[i].value, true);
          }
          out += '}';
        }
      },
      v.payload);
}

std::optional<std::int64_t> decode_integer(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string_view digits = s.front() == '-' ? s.substr(1) : s;
  if (digits.empty()) return std::nullopt;
  for (char c : digits)
    if (c < '0' || c > '9') return std::nullopt;
  if (digits.front() == '0' && (digits.size() > 1 || s.front() == '-')) return std::nullopt;
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> decode_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  if (encode_double(v) != s) return std::nullopt;
  return v;
}

std::optional<TypedValue> decode_record(std::string_view s, const RecordDecl& decl) {
  auto j = nlohmann::ordered_json::parse(s, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || j.size() != decl.fields.size())
    return std::nullopt;
  std::vector<FieldValue> fields;
  for (const auto& f : decl.fields) {
    auto it = j.find(f.name);
    if (it == j.end()) return std::nullopt;
    const auto& fv = *it;
    switch (f.base.kind) {
      case BaseType::Kind::Integer:
        if (fv.is_number_unsigned()) {
          if (fv.get<std::uint64_t>() >
              static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            return std::nullopt;
        } else if (!fv.is_number_integer()) {
          return std::nullopt;
        }
        fields.push_back({f.name, TypedValue::integer(fv.get<std::int64_t>())});
        break;
      case BaseType::Kind::Double:
        if (!fv.is_number_float() || !std::isfinite(fv.get<double>())) return std::nullopt;
        fields.push_back({f.name, TypedValue::dbl(fv.get<double>())});
        break;
      case BaseType::Kind::Boolean:
        if (!fv.is_boolean()) return std::nullopt;
        fields.push_back({f.name, TypedValue::boolean(fv.get<bool>())});
        break;
      case BaseType::Kind::Text:
        if (!fv.is_string()) return std::nullopt;
        fields.push_back({f.name, TypedValue::text(fv.get<std::string>())});
        break;
      case BaseType::Kind::Record:
        return std::nullopt;
    }
  }
  TypedValue v = TypedValue::record(decl.name, std::move(fields));
  // Only the canonical spelling is in the image: field order, escapes and
  // number formats must match byte for byte.
  if (encode(v) != s) return std::nullopt;
  return v;
}

}  // namespace

std::string encode_integer(std::int64_t v) { return std::to_string(v); }

std::string encode_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string sci(buf, end);
  if (!std::isfinite(v)) return sci;

  // Positional spelling built from the same shortest digits, zero padded.
  // std::to_chars would print the exact binary value for large integers.
  const bool negative = sci.front() == '-';
  const auto e = sci.find('e');
  std::string digits;
  for (char c : std::string_view(sci).substr(negative, e - negative))
    if (c != '.') digits += c;
  const int exp = std::stoi(sci.substr(e + 1));
  std::string fixed = negative ? "-" : "";
  if (exp >= 0) {
    const auto int_len = static_cast<std::size_t>(exp) + 1;
    if (digits.size() <= int_len) {
      fixed += digits + std::string(int_len - digits.size(), '0');
    } else {
      fixed += digits.substr(0, int_len) + "." + digits.substr(int_len);
    }
  } else {
    fixed += "0." + std::string(static_cast<std::size_t>(-exp - 1), '0') + digits;
  }

  if (fixed.size() > sci.size()) return sci;
  if (fixed.find('.') == std::string::npos) fixed += ".0";
  return fixed;
}

std::string encode(const TypedValue& v) {
  std::string out;
  append_encoded(out, v, false);
  return out;
}

Result<TypedValue, DecodeError> decode(std::string_view bytes, const BaseType& base,
                                       std::span<const RecordDecl> records) {
  DecodeError err{base, std::string(bytes)};
  switch (base.kind) {
    case BaseType::Kind::Integer:
      if (auto v = decode_integer(bytes)) return TypedValue::integer(*v);
      return err;
    case BaseType::Kind::Double:
      if (auto v = decode_double(bytes)) return TypedValue::dbl(*v);
      return err;
    case BaseType::Kind::Boolean:
      if (bytes == "true") return TypedValue::boolean(true);
      if (bytes == "false") return TypedValue::boolean(false);
      return err;
    case BaseType::Kind::Text:
      if (is_valid_utf8(bytes)) return TypedValue::text(std::string(bytes));
      return err;
    case BaseType::Kind::Record:
      for (const auto& r : records) {
        if (r.name != base.record) continue;
        if (auto v = decode_record(bytes, r)) return std::move(*v);
        return err;
      }
      return err;
  }
  return err;
}

std::string display(const TypedValue& v) {
  return std::visit(
      [&](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          std::string out;
          append_json_string(out, p);
          return out;
        } else if constexpr (std::is_same_v<T, std::vector<FieldValue>>) {
          std::string out = v.base.record + "{";
          for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) out += ", ";
            out += p[i].name + ": " + display(p[i].value);
          }
          return out + "}";
        } else {
          return encode(v);
        }
      },
      v.payload);
}

}  // namespace edis
