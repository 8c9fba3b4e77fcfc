#pragma once

// JSON and CSV encodings of rules and experiment results. Floating point
// values are written so that reading them back gives the same double.

#include "rsda/harness.hpp"
#include "rsda/rules.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rsda {

/// {"kind":"linear","omega":[...],"nu":[...]} or
/// {"kind":"rs","basis":{"columns":[[...],...],"rho":r,"kind":"full"|"economy",
///  "eigenvalues":[...]},"inner":{linear rule}}. Basis columns are stored
/// column by column.
std::string rule_to_json(const AnyRule& rule);

/// Throws ValidationError on malformed input.
AnyRule rule_from_json(std::string_view text);

/// Deterministic: carries the spec echo and per-replicate values but no
/// timing, so equal specs give byte-identical text.
std::string result_to_json(const ExperimentResult& result);

/// method,replicate,error (failed replicates leave error empty)
std::string result_to_long_csv(const ExperimentResult& result);

/// grid,method,mean,std
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// %.17g
std::string format_double(double value);

}  // namespace rsda
