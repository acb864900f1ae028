#pragma once

#include <iosfwd>
#include <string>

#include "netwave/classifier.hpp"
#include "netwave/simulator.hpp"
#include "netwave/system.hpp"

namespace netwave {

/// Parses a system document. Complex numbers are [re, im] pairs, matrices are
/// row-major arrays of such pairs, polynomials are arrays of matrices by
/// ascending degree. The parsed system is validated (including symmetrizer
/// synthesis) before being returned.
System parse_system(const std::string& json_text);
System load_system(const std::string& path);

/// Canonical emission; emit(parse(emit(s))) is byte-identical to emit(s).
std::string emit_system(const System& sys);
void save_system(const System& sys, const std::string& path);

std::string render_report_text(const WellPosednessReport& rep, bool explain);
std::string report_to_json(const WellPosednessReport& rep);

void write_timeseries_csv(const TimeSeries& ts, std::ostream& os);
void write_snapshot_csv(const SimState& state, int edge, std::ostream& os);

/// Tolerance overrides from the NETWAVE_TOLERANCES environment variable
/// (a path to a JSON object with tolerance fields), applied as defaults.
Tolerances env_default_tolerances();

}  // namespace netwave
