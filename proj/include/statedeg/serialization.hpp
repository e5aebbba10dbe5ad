#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "statedeg/channel_lift.hpp"
#include "statedeg/sdp_feasibility.hpp"
#include "statedeg/state_model.hpp"

namespace statedeg {

/// Malformed input. The message names the line (syntax errors) or the
/// offending field path (schema errors).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Json matrix_to_json(const ComplexMatrix& m); // row-major [[re, im], ...] rows

// State schema: {"dims": [n, p, q], "amplitudes": [[re, im], ...]}
Json state_to_json(const TripartiteState& state);
TripartiteState state_from_json(const Json& j);

// Channel schema: {"in_dim": n, "out_dim": m, "kraus": [matrix, ...]} where a
// matrix is a list of rows of [re, im] pairs.
Json kraus_to_json(const KrausSet& k);
KrausSet kraus_from_json(const Json& j);

/// Parses text, turning syntax errors into ParseError with a line number.
Json parse_json(const std::string& text, const std::string& source);

Json outcome_to_json(const FeasibilityOutcome& outcome, Direction direction);
Json config_to_json(const DecideConfig& config);
Json channel_report_to_json(const ChannelReport& report);

/// Shortest round-trip formatting, two-space indent, trailing newline.
std::string dump(const Json& j);

} // namespace statedeg
