#pragma once

#include <string>

#include <json.hpp>

#include "amqlab/harness.hpp"

namespace amqlab {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form, identical in JSON and CSV output.
std::string format_double(double v);

Json params_json(const ParamList& params);
/// "m=64;k=3" form for CSV cells.
std::string params_cell(const ParamList& params);

/// {structure, params, l, trials, seed, successes, estimate, ci_low, ci_high,
///  analytic_exact ("num/den" or null), analytic_float, z, aborted_trials}
Json to_json(const SimulationReport& report);

}  // namespace amqlab
