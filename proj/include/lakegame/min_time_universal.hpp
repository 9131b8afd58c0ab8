#pragma once

// Universal Line (theta = 0) and its tributaries. Below the partition
// theta = r/mu, L swims straight to the centre, passes through it onto the
// focal line, and M's rate has no effect on her progress.

#include "lakegame/core_model.hpp"

namespace lakegame::universal {

/// Retrograde sample of the UL tributary leaving the UL at radius r0:
/// r = r0 + mu*tau, theta = tau. With r0 = 0 this is the partition line.
struct UlSample {
    double tau = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double r0 = 0.0;
};

/// On the UL: head to the centre, M stands still.
ControlPair ul_control(const PolarState& state, const GameParams& params);

/// Below the partition: head to the centre. omega is reported as 1 and
/// flagged arbitrary.
ControlPair ul_tributary_heading(const PolarState& state, const GameParams& params);

/// Time to reach the antipodal point: r/mu to the centre plus pi/2 on the FL.
double ul_time_to_E(const PolarState& state, const GameParams& params);

UlSample ul_flowfield(double tau, const GameParams& params, double r0 = 0.0);

/// theta <= r/mu (+ tol_event): the closed UL-tributary region.
bool in_ul_region(const PolarState& state, const GameParams& params);

}  // namespace lakegame::universal
