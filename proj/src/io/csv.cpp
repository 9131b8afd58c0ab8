#include "lakegame/io/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace lakegame::io {

std::string format_number(double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

CsvRow to_row(const sim::Sample& s) {
    return {s.t,        s.state.r,  s.state.theta,      s.pose.x_L,         s.pose.y_L,
            s.pose.x_M, s.pose.y_M, s.controls.cos_psi, s.controls.sin_psi, s.controls.omega};
}

void write_trajectory_csv(std::ostream& out, const sim::Trajectory& trajectory) {
    out << kTrajectoryHeader << '\n';
    for (const auto& s : trajectory.samples) {
        const CsvRow row = to_row(s);
        out << format_number(row.t) << ',' << format_number(row.r) << ','
            << format_number(row.theta) << ',' << format_number(row.x_L) << ','
            << format_number(row.y_L) << ',' << format_number(row.x_M) << ','
            << format_number(row.y_M) << ',' << format_number(row.cos_psi) << ','
            << format_number(row.sin_psi) << ',' << format_number(row.omega) << '\n';
    }
    for (const auto& e : trajectory.events) {
        out << "# event," << format_number(e.t) << ',' << sim::to_string(e.kind) << '\n';
    }
}

namespace {

double parse_field(std::string_view text, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        std::ostringstream os;
        os << "line " << line << ": bad number '" << text << "'";
        fail(ErrorCode::Io, os.str());
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

ParsedTrajectory read_trajectory_csv(std::istream& in) {
    ParsedTrajectory out;
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader) {
        fail(ErrorCode::Io, "trajectory CSV: missing or unexpected header");
    }
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        if (line.starts_with("# event,")) {
            const auto f = split(std::string_view(line).substr(8));
            if (f.size() != 2) fail(ErrorCode::Io, "trajectory CSV: malformed event line");
            out.events.push_back({parse_field(f[0], n), std::string(f[1])});
            continue;
        }
        if (line.starts_with('#')) continue;
        const auto f = split(line);
        if (f.size() != 10) {
            std::ostringstream os;
            os << "trajectory CSV: line " << n << " has " << f.size() << " fields";
            fail(ErrorCode::Io, os.str());
        }
        out.rows.push_back({parse_field(f[0], n), parse_field(f[1], n), parse_field(f[2], n),
                            parse_field(f[3], n), parse_field(f[4], n), parse_field(f[5], n),
                            parse_field(f[6], n), parse_field(f[7], n), parse_field(f[8], n),
                            parse_field(f[9], n)});
    }
    return out;
}

}  // namespace lakegame::io
