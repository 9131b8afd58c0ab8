#pragma once

// Command implementations behind the lakegame CLI. Each returns the process
// exit code; run() maps library errors onto codes and prints a one-line
// diagnostic.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace lakegame::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitIo = 3;

enum class Command { Solve, Flowfield, Simulate, Verify, CriticalMu };
enum class OutputFormat { Csv, Json, Svg };

struct RunConfig {
    Command command = Command::Solve;
    double mu = 0.3;
    double r = 0.0;
    double theta = 0.0;
    std::string lady = "eq";
    std::string man = "eq";
    double dt = 1e-4;
    double t_max = 20.0;
    std::size_t grid = 50;
    std::size_t s_grid = 20;
    std::size_t ul_grid = 10;
    std::size_t fan_grid = 15;
    /// classical, time, tributary or all
    std::string game = "all";
    std::optional<std::string> out;
    std::string out_dir = ".";
    std::optional<OutputFormat> format;

    /// Throws LakeError(InvalidParams / Domain) on bad values.
    void validate() const;
};

/// JSON advice for the state (r, theta).
int cmd_solve(const RunConfig& config, std::ostream& out);
/// SVG or CSV flowfields; with game "all" writes classical.svg, full.svg and
/// fl-tributary.svg into out_dir.
int cmd_flowfield(const RunConfig& config, std::ostream& out);
/// Trajectory CSV to the --out file or to `out`; summary line to `err`.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
/// JSON report; exit 1 when a suite fails.
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_critical_mu(const RunConfig& config, std::ostream& out);

/// Validates and dispatches; LakeError(Io) -> 3, other LakeError -> 2.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses an angle in radians. A literal with at least 6 decimals that
/// matches 0 or +-pi to half a unit in its last digit is snapped to it, so
/// "3.14159265" means pi. Throws LakeError(Domain) on anything else, e.g.
/// a degree suffix.
double parse_angle(std::string_view text);

/// Parses "csv", "json" or "svg".
std::optional<OutputFormat> parse_format(std::string_view text);

}  // namespace lakegame::io
