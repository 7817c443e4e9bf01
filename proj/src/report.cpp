#include "edis/report.hpp"

#include "json.hpp"

namespace edis {
namespace {

using json = nlohmann::ordered_json;

std::string dump(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

json dict_array(const TypeDict& xs) {
  json out = json::array();
  for (const auto& e : xs) out.push_back({{"key", e.key}, {"tag", to_string(e.tag)}});
  return out;
}

}  // namespace

std::string dict_json(const TypeDict& xs) { return dump(dict_array(xs)); }

std::string check_report_json(const CheckReport& r) {
  if (r) {
    return dump({{"status", "ok"},
                 {"final_dict", dict_array(r->final_dict)},
                 {"result_type", to_string(r->result)}});
  }
  const TypeError& e = r.error();
  return dump({{"status", "error"},
               {"line", e.span.line},
               {"col", e.span.column},
               {"constraint", std::string(constraint_id(e.constraint))},
               {"message", e.message()}});
}

std::string parse_error_json(const ParseError& e) {
  return dump({{"status", "parse_error"},
               {"line", e.line},
               {"col", e.column},
               {"message", e.message()}});
}

std::string run_outcome_json(const RunOutcome& r) {
  if (r) {
    return dump({{"status", "ok"},
                 {"result_type", to_string(r->type)},
                 {"value", display(*r)}});
  }
  const RuntimeFailure& f = r.error();
  return dump({{"status", "runtime_error"},
               {"line", f.span.line},
               {"col", f.span.column},
               {"command", std::string(opcode_name(f.op))},
               {"message", f.message}});
}

Result<TypeDict, std::string> parse_assumption(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) return std::string("assumption file is not valid JSON");
  if (doc.is_object()) {
    if (!doc.contains("final_dict")) return std::string("object has no \"final_dict\" member");
    doc = doc["final_dict"];
  }
  if (!doc.is_array()) return std::string("expected an array of {\"key\", \"tag\"} entries");

  TypeDict out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& e = doc[i];
    const std::string where = "entry " + std::to_string(i);
    if (!e.is_object() || !e.contains("key") || !e.contains("tag") || !e["key"].is_string() ||
        !e["tag"].is_string())
      return where + ": expected {\"key\": string, \"tag\": string}";
    const auto key = e["key"].get<std::string>();
    if (!is_symbol(key)) return where + ": '" + key + "' is not a valid key";
    auto tag = parse_type_tag(e["tag"].get<std::string>());
    if (!tag) return where + ": " + tag.error().message();
    out.push_back({key, std::move(*tag)});
  }
  return out;
}

}  // namespace edis
