#pragma once

#include <string>

#include "dcakit/dca_engine.hpp"

namespace dcakit {

/// CSV with one row per record: k, the coordinates of x, f, and the step
/// fields (blank on the terminal row). Numbers are printed with 17
/// significant digits so values survive a round trip bit-for-bit.
std::string trace_to_csv(const Trace& tr);

/// Rebuild the numeric part of a trace from CSV. Metadata that CSV does not
/// carry (status, configuration, subgradients) keeps default values.
Trace trace_from_csv(const std::string& text);

/// Full-fidelity JSON: metadata, configuration echo, warnings, and every
/// record including subgradients. Non-finite values are encoded as the
/// strings "inf", "-inf", and "nan".
std::string trace_to_json(const Trace& tr);

Trace trace_from_json(const std::string& text);

RunStatus status_from_string(const std::string& s);
TieBreak tie_break_from_string(const std::string& s);
SelectionRule selection_rule_from_strings(const std::string& kind, const Vector* value);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace dcakit
