#pragma once

#include <nlohmann/json.hpp>

#include "crossmax/counterexamples.hpp"
#include "crossmax/verifier.hpp"

namespace crossmax {

/// Shortest decimal rendering that round-trips the double exactly.
std::string format_double(double v);

nlohmann::json report_body(const VerificationReport& rep);
nlohmann::json report_body(const CounterexampleResult& res);

/// Wraps a body in the versioned envelope. The timestamp lives in a separate
/// metadata block so report bodies are byte-reproducible.
std::string render_report(const nlohmann::json& body);

/// CSV with header row and LF endings: node coordinates followed by one
/// column per component, one row per grid node.
std::string field_csv(const VectorField& W);
std::string field_csv(const ScalarField& f);

/// Re-imports a field_csv document (used for the round-trip guarantee).
VectorField parse_field_csv(const std::string& text, const Grid& grid);

}  // namespace crossmax
