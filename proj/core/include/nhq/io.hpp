#pragma once

#include "nhq/fitting.hpp"
#include "nhq/params.hpp"
#include "nhq/state.hpp"
#include "nhq/units.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nhq {

/// 17 significant digits, no negative zero. Deterministic across runs.
std::string format_number(double value);

/// Parses `key = value [unit]` lines. `#` starts a comment; blank lines are skipped.
///
/// Keys: omega0, omega1, omega10, gamma0, gamma1, gamma, gamma01, rabi0,
/// drive_freq, detuning, drive_phase. Frequencies take MHz/GHz/rad/s/rad/ns,
/// rates take us^-1/ns^-1, drive_phase takes rad or deg. Without a unit the
/// value is read in internal units. omega0 defaults to 0, or to -omega10/2
/// when the splitting is given as omega10. gamma01 also accepts `physical`
/// (sqrt(gamma0*gamma1), the default) and `none` (0).
///
/// Throws ParseError with the offending line number.
QubitParams parse_params(std::istream& in);
QubitParams load_params(const std::filesystem::path& path);

/// CSV with header `t_ns,rho11,rho00,p_esc,n0,nx,ny,nz`, plus a trailing
/// `deviation_F` column when the series carries one. Probabilities are clipped
/// for floating-point dust only.
void write_csv(std::ostream& out, const TimeSeries& series);

/// JSON array of records with the same fields as the CSV.
void write_json(std::ostream& out, const TimeSeries& series);

/// Reads fit data: header `t,p[,weight]`, optional `# time_unit = <unit>` line
/// before the header. `time_unit` overrides the declaration; with neither,
/// times are in ns. Throws ParseError citing the line of a malformed row.
std::vector<DataPoint> read_fit_data(std::istream& in, std::optional<Unit> time_unit = {});
std::vector<DataPoint> load_fit_data(const std::filesystem::path& path,
                                     std::optional<Unit> time_unit = {});

/// Writes data readable by read_fit_data, with a time unit declaration.
void write_fit_data(std::ostream& out, const std::vector<DataPoint>& data, Unit time_unit);

} // namespace nhq
