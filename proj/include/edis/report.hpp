#pragma once

// Machine-readable reports. Tags and result types are rendered in surface
// syntax, so a final_dict can be fed back in as an assumption.

#include <string>
#include <string_view>

#include "edis/backend.hpp"
#include "edis/checker.hpp"
#include "edis/parser.hpp"
#include "edis/result.hpp"

namespace edis {

/// {"status":"ok","final_dict":[{"key":..,"tag":..}],"result_type":..} or
/// {"status":"error","line":n,"col":n,"constraint":..,"message":..}
std::string check_report_json(const CheckReport& r);

/// {"status":"parse_error","line":n,"col":n,"message":..}
std::string parse_error_json(const ParseError& e);

/// {"status":"ok","result_type":..,"value":..} or
/// {"status":"runtime_error","line":n,"col":n,"command":..,"message":..}
std::string run_outcome_json(const RunOutcome& r);

std::string dict_json(const TypeDict& xs);

/// Reads an assumed initial dictionary: either a final_dict array or a whole
/// ok-report object carrying one.
Result<TypeDict, std::string> parse_assumption(std::string_view json_text);

}  // namespace edis
