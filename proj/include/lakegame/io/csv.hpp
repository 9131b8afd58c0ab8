#pragma once

// Trajectory CSV: fixed header, 12 significant digits, events as trailing
// comment lines.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lakegame/simulator.hpp"

namespace lakegame::io {

inline constexpr std::string_view kTrajectoryHeader =
    "t,r,theta,x_L,y_L,x_M,y_M,cos_psi,sin_psi,omega";

/// %.12g
std::string format_number(double v);

void write_trajectory_csv(std::ostream& out, const sim::Trajectory& trajectory);

struct CsvRow {
    double t = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double x_L = 0.0;
    double y_L = 0.0;
    double x_M = 0.0;
    double y_M = 0.0;
    double cos_psi = 0.0;
    double sin_psi = 0.0;
    double omega = 0.0;
};

struct CsvEvent {
    double t = 0.0;
    std::string kind;
};

struct ParsedTrajectory {
    std::vector<CsvRow> rows;
    std::vector<CsvEvent> events;
};

/// Inverse of write_trajectory_csv. Throws LakeError(Io) on malformed input.
ParsedTrajectory read_trajectory_csv(std::istream& in);

/// The row write_trajectory_csv emits for a sample, before formatting.
CsvRow to_row(const sim::Sample& sample);

}  // namespace lakegame::io
