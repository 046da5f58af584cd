#pragma once

// Reader for the TOML subset used by scene files: tables, arrays of tables,
// dotted keys, basic and literal strings, integers, booleans, arrays and
// inline tables. Floats, dates and multi-line strings are rejected. The
// result is plain JSON so one schema validator serves both formats.

#include <json.hpp>

#include <string_view>

namespace padicwf {

/// Throws Error(Parse) with a line number on malformed or unsupported input.
nlohmann::json parse_toml_subset(std::string_view text);

}  // namespace padicwf
