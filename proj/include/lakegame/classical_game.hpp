#pragma once

// Classical min-max terminal-angle game: L maximizes and M minimizes the
// angular separation at the instant L reaches the shore.

#include "lakegame/core_model.hpp"

namespace lakegame::classical {

enum class BarrierSide { Above, On, Below };

struct ClassicalSolution {
    double value = 0.0;  // equilibrium terminal angle
    ControlPair controls;
};

struct BarrierPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// Equilibrium heading: sin psi = mu/r (tangent-away), omega = 1. Needs r >= mu.
ControlPair classical_heading(const PolarState& state, const GameParams& params);

/// Equilibrium terminal angle from a state with r >= mu.
double classical_value(const PolarState& state, const GameParams& params);

ClassicalSolution classical_solution(const PolarState& state, const GameParams& params);

/// Terminal angle obtained when leaving the antipodal point along the barrier.
double theta_T(const GameParams& params);
double theta_T(double mu);

/// Root of theta_T(mu) = 0 on (0, 1), by bracketing and bisection.
double critical_mu(const GameParams& params);

/// Barrier curve B(r) on [mu, 1].
double barrier_theta(double r, const GameParams& params);
BarrierPoint barrier_point(double r, const GameParams& params);

/// Slope dB/dr, evaluated term by term from the barrier expression.
double barrier_slope(double r, const GameParams& params);

/// min_omega max_psi of n . (rdot, thetadot) on the curve B(r) + offset,
/// with the normal n = (-dB/dr, 1). Zero for a semipermeable curve.
double barrier_residual(double r, const GameParams& params, double offset = 0.0);

BarrierSide classify_vs_barrier(const PolarState& state, const GameParams& params);

/// Closed-form classical flow: theta reached at radius r_to when starting
/// from (r_from, theta_from) under equilibrium play, r_from, r_to >= mu.
double classical_flow(double r_from, double theta_from, double r_to, const GameParams& params);

}  // namespace lakegame::classical
