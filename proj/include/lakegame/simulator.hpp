#pragma once

// Closed-loop forward simulation of the reduced dynamics with feedback
// strategies for both players. Fixed-step RK4; events are located inside a
// step by bisection on the step length.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lakegame/core_model.hpp"
#include "lakegame/full_solution.hpp"

namespace lakegame::sim {

enum class Side { Lady, Man };

struct Equilibrium {};
struct ConstantOmega {
    double value = 0.0;
};
/// omega = +1 on [0, p), -1 on [p, 2p), ... in M's physical frame.
struct SwitchingOmega {
    double period = 1.0;
};
/// Heading fixed in the rotating (radial, tangential) frame of L.
struct FixedHeading {
    double cos_psi = 1.0;
    double sin_psi = 0.0;
};
/// Equilibrium heading rotated by delta_psi, except on the singular lines.
struct PerturbedEquilibrium {
    double delta_psi = 0.0;
};

using StrategyKind =
    std::variant<Equilibrium, ConstantOmega, SwitchingOmega, FixedHeading, PerturbedEquilibrium>;

struct StrategySpec {
    Side side = Side::Lady;
    StrategyKind kind = Equilibrium{};

    /// Throws InvalidParams when the kind does not belong to the side or
    /// its parameters are out of range.
    void validate() const;

    static StrategySpec equilibrium(Side side) { return {side, Equilibrium{}}; }
    /// Parses "eq", "constant:<w>", "switching:<period>", "fixed:<cos>,<sin>"
    /// and "perturbed:<delta>".
    static StrategySpec parse(Side side, std::string_view text);
    std::string describe() const;
};

enum class EventKind {
    FocalLineEntry,
    UniversalLineEntry,
    OriginPassage,
    BarrierCrossing,
    ReachedE,
    ReachedShore,
    StrategyError,
};

enum class Outcome { ReachedE, ReachedShore, Timeout, Aborted };

std::string_view to_string(EventKind kind);
std::string_view to_string(Outcome outcome);

struct Event {
    double t = 0.0;
    EventKind kind = EventKind::FocalLineEntry;
    PolarState state;          // canonical state at the event, before any snap
    double theta_rate = 0.0;   // dtheta/dt just before the event
    std::optional<double> s;   // predicted entry radius, FL entries only
    std::string detail;        // BarrierCrossing: "upward" or "downward"
};

struct Sample {
    double t = 0.0;
    PolarState state;     // canonical
    ControlPair controls; // canonical frame
    CartesianPose pose;   // physical frame, M starts at (1, 0)
    RegionLabel region = RegionLabel::Shore;
};

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<Event> events;
    Outcome outcome = Outcome::Timeout;
    double t_final = 0.0;
    /// Terminal separation when the outcome is ReachedShore.
    std::optional<double> theta_f;
    std::string error;

    std::size_t count(EventKind kind) const;
    const Event* first(EventKind kind) const;
};

struct SimOptions {
    double dt = 1e-4;
    double t_max = 20.0;
    /// When false only the first and last samples are kept.
    bool record = true;
};

Trajectory simulate(const PolarState& initial, const StrategySpec& lady, const StrategySpec& man,
                    const GameParams& params, const SimOptions& options = {});

Trajectory simulate(const PolarState& initial, const StrategySpec& lady, const StrategySpec& man,
                    double dt, double t_max, const GameParams& params);

struct DeviationRow {
    StrategySpec deviation;
    Outcome outcome = Outcome::Timeout;
    /// Arrival time at E, or at the first upward crossing of B when that comes
    /// first; +inf when neither happens.
    double time = 0.0;
    /// Signed slack in the saddle inequality: time - t_eq for L deviations,
    /// t_eq - time for M deviations. Non-negative up to tolerance.
    double margin = 0.0;
};

struct DeviationReport {
    PolarState initial;
    double equilibrium_time = 0.0;
    double predicted_value = 0.0;
    std::vector<DeviationRow> rows;

    double worst_margin() const;
};

/// Simulates mutual equilibrium play and each one-sided deviation. The
/// deviating side plays the given spec, the other side plays equilibrium.
/// Runs are evaluated concurrently.
DeviationReport deviation_report(const PolarState& initial, const GameParams& params,
                                 const std::vector<StrategySpec>& deviations,
                                 const SimOptions& options = {});

/// L perturbations of +-delta for each delta.
DeviationReport deviation_report(const PolarState& initial, const GameParams& params,
                                 const std::vector<double>& deltas,
                                 const SimOptions& options = {});

}  // namespace lakegame::sim
