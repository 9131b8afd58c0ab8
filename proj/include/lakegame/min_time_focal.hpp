#pragma once

// Focal Line (theta = pi, 0 < r <= mu) of the min-max time-to-antipodal-point
// game and its tributaries. A tributary is a straight Cartesian path tangent
// to the circle of radius s^2/mu that merges tangentially onto the FL at
// radius s; s is found numerically from equal arrival times of L and M.

#include <optional>
#include <vector>

#include "lakegame/core_model.hpp"

namespace lakegame::focal {

enum class EntryCase { One, Two };

/// PreTangent: moving inward toward the tangent circle (cos psi < 0).
/// PostTangent: moving outward toward the entry point (cos psi > 0).
enum class Phase { PreTangent, PostTangent };

inline Phase phase_of(EntryCase c) { return c == EntryCase::One ? Phase::PreTangent : Phase::PostTangent; }

struct ArrivalTimes {
    double t_L = 0.0;
    double t_M = 0.0;
};

struct EntrySolution {
    double s = 0.0;
    EntryCase case_tag = EntryCase::One;
    double t_L = 0.0;
    double t_M = 0.0;
    double total_time = 0.0;  // t_L + time on the FL from s
    /// Every root bracketed by the scan for the chosen case (diagnostics only;
    /// filled when requested).
    std::vector<double> all_roots;
};

struct FlowfieldSample {
    double tau = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double s = 0.0;
};

struct SolveOptions {
    std::size_t grid_points = 4096;
    bool record_all_roots = false;
};

/// On-FL control keeping theta fixed: sin psi = omega_now * r / mu, cos psi >= 0.
ControlPair fl_control(const PolarState& state, double omega_now, const GameParams& params);

/// Time to ride the FL from radius s to mu: pi/2 - asin(s/mu).
double time_on_fl(double s, const GameParams& params);

/// Equilibrium tributary heading: sin psi = s^2/(mu r), cos sign by phase.
ControlPair fl_tributary_heading(const PolarState& state, double s, Phase phase,
                                 const GameParams& params);

/// Closed-form retrograde flowfield of the tributary entering at s.
FlowfieldSample fl_flowfield(double s, double tau, const GameParams& params);

/// Retrograde time at which the tributary is closest to the centre (r = s^2/mu).
double tau_bar(double s, const GameParams& params);

/// Arrival times of L at (s, pi) and of M at the matching antipodal alignment.
ArrivalTimes arrival_times(const PolarState& state, double s, EntryCase case_tag,
                           const GameParams& params);

/// delta(s) = t_L(s) - t_M(s) for the given case.
double arrival_gap(const PolarState& state, double s, EntryCase case_tag,
                   const GameParams& params);

struct ScanDomain {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return !(hi >= lo); }
};

/// s-interval on which the case's formulas are real.
ScanDomain case_domain(const PolarState& state, EntryCase case_tag, const GameParams& params);

/// Smallest root of delta on the Case One domain, falling back to Case Two.
EntrySolution solve_entry(const PolarState& state, const GameParams& params,
                          const SolveOptions& options = {});

/// Looks for the root closest to a previous solution first and falls back
/// to solve_entry when no local bracket exists. Used by feedback strategies.
EntrySolution solve_entry_near(const PolarState& state, const EntrySolution& hint,
                               const GameParams& params);

}  // namespace lakegame::focal
