// JSON front end for SimConfig. Lives beside the CLI so the solver library
// keeps no serialization dependency.
#pragma once

#include <string>

#include "polyflow/config.hpp"

namespace polyflow {

// Strict parse: unknown keys and wrong types are errors. The result is
// validated; a valid document yields a ready-to-run config.
// Throws ParseError (malformed document, 1-based line when known) or
// ValidationError (well-formed but inadmissible values).
SimConfig parse_config(const std::string& text);

// Canonical JSON document. parse_config(serialize_config(c)) == c for every
// valid config.
std::string serialize_config(const SimConfig& c);

// Field-by-field equality, doubles compared bitwise.
bool config_equal(const SimConfig& a, const SimConfig& b);

}  // namespace polyflow
