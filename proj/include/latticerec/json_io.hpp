#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "latticerec/autonomous.hpp"
#include "latticerec/state.hpp"

namespace latticerec {

using Json = nlohmann::json;

// Integers that fit in 64 bits print as JSON numbers, everything else as
// strings ("123456789012345678901234", "3/4").
Json number_json(const Integer& v);
Json number_json(const Rational& v);
Rational rational_from_json(const Json& j);
Integer integer_from_json(const Json& j);

Json multi_index_json(const MultiIndex& t);
Json state_json(const State& x);
State state_from_json(const StateSpace& space, const Json& j);

// Command-line spellings: "3", "1,2", "1/2,0".
MultiIndex parse_multi_index_text(std::string_view text);
State parse_state_text(const StateSpace& space, std::string_view text);

Json report_json(const CompatibilityReport& report);
Json path_json(const MonotonePath& path);

std::vector<std::string> csv_state_header(const StateSpace& space);
std::vector<std::string> csv_state_cells(const State& x);

// FNV-1a 64, hex.
std::string digest_hex(std::string_view bytes);

}  // namespace latticerec
