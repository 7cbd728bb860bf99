#include "nhq/io.hpp"

#include "nhq/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace nhq {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s)
{
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

enum class KeyKind { Frequency, Rate, Phase };

const std::map<std::string, KeyKind>& known_keys()
{
    static const std::map<std::string, KeyKind> keys{
        {"omega0", KeyKind::Frequency},   {"omega1", KeyKind::Frequency},
        {"omega10", KeyKind::Frequency},  {"rabi0", KeyKind::Frequency},
        {"drive_freq", KeyKind::Frequency}, {"detuning", KeyKind::Frequency},
        {"gamma0", KeyKind::Rate},        {"gamma1", KeyKind::Rate},
        {"gamma", KeyKind::Rate},         {"gamma01", KeyKind::Rate},
        {"drive_phase", KeyKind::Phase},
    };
    return keys;
}

struct Entry {
    double value;
    std::size_t line;
};

void write_row_values(std::ostream& out, const TimeSeries& s, std::size_t i, const char* sep,
                      bool json)
{
    const auto& r = s.rows[i];
    const double values[] = {s.times[i], clip_probability(r.rho11), clip_probability(r.rho00),
                             clip_probability(r.p_esc), r.bloch.n0, r.bloch.nx, r.bloch.ny,
                             r.bloch.nz};
    static const char* names[] = {"t_ns", "rho11", "rho00", "p_esc", "n0", "nx", "ny", "nz"};
    for (std::size_t k = 0; k < 8; ++k) {
        if (k) out << sep;
        if (json) out << '"' << names[k] << "\":";
        out << format_number(values[k]);
    }
    if (!s.deviation.empty()) {
        out << sep;
        if (json) out << "\"deviation_F\":";
        out << format_number(s.deviation[i]);
    }
}

} // namespace

std::string format_number(double value)
{
    if (value == 0.0) value = 0.0; // drop the sign of -0
    if (std::isnan(value)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

QubitParams parse_params(std::istream& in)
{
    std::map<std::string, Entry> entries;
    std::optional<std::size_t> gamma01_physical_line;
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value [unit]'");
        const std::string key = trim(line.substr(0, eq));
        const std::string rhs = trim(line.substr(eq + 1));
        const auto kind_it = known_keys().find(key);
        if (kind_it == known_keys().end()) throw ParseError(line_no, "unknown key '" + key + "'");
        if (entries.contains(key) || (key == "gamma01" && gamma01_physical_line)) {
            throw ParseError(line_no, "duplicate key '" + key + "'");
        }

        std::istringstream tokens(rhs);
        std::string number, unit, extra;
        tokens >> number >> unit >> extra;
        if (!extra.empty()) throw ParseError(line_no, "trailing text after unit");

        if (key == "gamma01" && unit.empty() && (number == "physical" || number == "none")) {
            if (number == "physical") {
                gamma01_physical_line = line_no;
            } else {
                entries[key] = {0.0, line_no};
            }
            continue;
        }

        const auto value = to_double(number);
        if (!value) throw ParseError(line_no, "invalid number '" + number + "'");

        double converted = *value;
        if (kind_it->second == KeyKind::Phase) {
            if (unit == "deg") converted = *value * std::numbers::pi / 180.0;
            else if (!unit.empty() && unit != "rad") throw ParseError(line_no, "drive_phase takes rad or deg");
        } else if (!unit.empty()) {
            Unit u{};
            try {
                u = parse_unit(unit);
            } catch (const UnitError& e) {
                throw ParseError(line_no, e.what());
            }
            const Dimension want = kind_it->second == KeyKind::Frequency ? Dimension::AngularFrequency
                                                                         : Dimension::Rate;
            if (dimension_of(u) != want) {
                throw ParseError(line_no, "unit '" + unit + "' does not fit key '" + key + "'");
            }
            converted = to_internal(*value, u);
        }
        entries[key] = {converted, line_no};
    }

    auto has = [&](const char* k) { return entries.contains(k); };
    auto val = [&](const char* k) { return entries.at(k).value; };
    auto conflict = [&](const char* a, const char* b) {
        if (has(a) && has(b)) {
            throw ParseError(std::max(entries.at(a).line, entries.at(b).line),
                             std::string("'") + a + "' and '" + b + "' are mutually exclusive");
        }
    };
    conflict("omega1", "omega10");
    conflict("gamma1", "gamma");
    conflict("drive_freq", "detuning");

    QubitParams p;
    // A bare omega10 places the energy zero midway between the levels.
    const double w10 = has("omega10") ? val("omega10") : 0.0;
    p.omega0 = has("omega0") ? val("omega0") : (has("omega1") ? 0.0 : -0.5 * w10);
    p.omega1 = has("omega1") ? val("omega1") : p.omega0 + w10;
    p.gamma0 = has("gamma0") ? val("gamma0") : 0.0;
    p.gamma1 = has("gamma1") ? val("gamma1") : (has("gamma") ? 2.0 * val("gamma") - p.gamma0 : 0.0);
    p.gamma01 = has("gamma01") ? val("gamma01") : p.physical_gamma01();
    p.rabi0 = has("rabi0") ? val("rabi0") : 0.0;
    p.drive_freq = has("drive_freq") ? val("drive_freq")
                                     : p.omega10() - (has("detuning") ? val("detuning") : 0.0);
    p.drive_phase = has("drive_phase") ? val("drive_phase") : 0.0;
    try {
        p.validate();
    } catch (const InvalidParams& e) {
        throw ParseError(0, std::string("invalid parameter set: ") + e.what());
    }
    return p;
}

QubitParams load_params(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open parameter file '" + path.string() + "'");
    return parse_params(in);
}

void write_csv(std::ostream& out, const TimeSeries& series)
{
    out << "t_ns,rho11,rho00,p_esc,n0,nx,ny,nz";
    if (!series.deviation.empty()) out << ",deviation_F";
    out << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        write_row_values(out, series, i, ",", false);
        out << '\n';
    }
}

void write_json(std::ostream& out, const TimeSeries& series)
{
    out << "[";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << (i ? ",\n  {" : "\n  {");
        write_row_values(out, series, i, ",", true);
        out << '}';
    }
    out << (series.size() ? "\n]\n" : "]\n");
}

std::vector<DataPoint> read_fit_data(std::istream& in, std::optional<Unit> time_unit)
{
    std::optional<Unit> declared;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool has_weight = false;
    std::vector<DataPoint> data;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos && trim(body.substr(0, eq)) == "time_unit") {
                try {
                    declared = parse_unit(trim(body.substr(eq + 1)));
                } catch (const UnitError& e) {
                    throw ParseError(line_no, e.what());
                }
                if (dimension_of(*declared) != Dimension::Time) {
                    throw ParseError(line_no, "time_unit must be a time unit");
                }
            }
            continue;
        }
        const auto fields = split(line, ',');
        if (!header_seen) {
            if (fields.size() == 2 && fields[0] == "t" && fields[1] == "p") {
                has_weight = false;
            } else if (fields.size() == 3 && fields[0] == "t" && fields[1] == "p" && fields[2] == "weight") {
                has_weight = true;
            } else {
                throw ParseError(line_no, "expected header 't,p' or 't,p,weight'");
            }
            header_seen = true;
            continue;
        }
        const std::size_t expected = has_weight ? 3 : 2;
        if (fields.size() != expected) {
            throw ParseError(line_no, "expected " + std::to_string(expected) + " fields, got " +
                                          std::to_string(fields.size()));
        }
        DataPoint d;
        const auto t = to_double(fields[0]);
        const auto p = to_double(fields[1]);
        if (!t || !p) throw ParseError(line_no, "malformed number");
        d.t = *t;
        d.p = *p;
        if (has_weight) {
            const auto w = to_double(fields[2]);
            if (!w || *w < 0.0) throw ParseError(line_no, "weight must be a non-negative number");
            d.weight = *w;
        }
        if (!data.empty() && !(d.t > data.back().t)) {
            throw ParseError(line_no, "times must be strictly increasing");
        }
        data.push_back(d);
    }
    if (!header_seen) throw ParseError(0, "missing header 't,p[,weight]'");

    const Unit unit = time_unit.value_or(declared.value_or(Unit::Ns));
    if (dimension_of(unit) != Dimension::Time) throw UnitError("time unit must be ns or us");
    for (auto& d : data) d.t = to_internal(d.t, unit);
    return data;
}

std::vector<DataPoint> load_fit_data(const std::filesystem::path& path, std::optional<Unit> time_unit)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open data file '" + path.string() + "'");
    return read_fit_data(in, time_unit);
}

void write_fit_data(std::ostream& out, const std::vector<DataPoint>& data, Unit time_unit)
{
    bool weighted = false;
    for (const auto& d : data) weighted = weighted || d.weight != 1.0;
    out << "# time_unit = " << unit_name(time_unit) << '\n';
    out << (weighted ? "t,p,weight\n" : "t,p\n");
    for (const auto& d : data) {
        out << format_number(from_internal(d.t, time_unit)) << ',' << format_number(d.p);
        if (weighted) out << ',' << format_number(d.weight);
        out << '\n';
    }
}

} // namespace nhq
