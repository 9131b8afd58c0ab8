#pragma once

// Reduced relative model of the Lady in the Lake game.
//
// Lengths are in lake radii and time is scaled so that M runs the perimeter
// at unit angular rate. L swims at speed mu < 1. The state is the polar
// position of L measured from M: radius r and angular separation theta.

#include <numbers>
#include <utility>

#include "lakegame/errors.hpp"

namespace lakegame {

inline constexpr double kPi = std::numbers::pi;

struct GameParams {
    double mu = 0.3;
    double eps_r = 1e-9;
    double tol_root = 1e-12;
    double tol_event = 1e-9;

    /// Validates and returns a parameter set. Throws InvalidParams.
    static GameParams make(double mu, double eps_r = 1e-9, double tol_root = 1e-12,
                           double tol_event = 1e-9);

    void validate() const;

    /// True when mu <= mu_crit, i.e. L cannot escape from the antipodal
    /// point with positive separation. The min-time game is still defined.
    bool subcritical() const;
};

/// Canonical reduced state: 0 <= r <= 1 and 0 <= theta <= pi.
struct PolarState {
    double r = 0.0;
    double theta = 0.0;
};

/// L's heading as direction cosines plus M's angular rate.
struct ControlPair {
    double cos_psi = 1.0;
    double sin_psi = 0.0;
    double omega = 0.0;
    /// Set when every omega in [-1, 1] is equally optimal and the reported
    /// value is a convention.
    bool omega_arbitrary = false;

    void validate() const;
};

struct CartesianPose {
    double x_L = 0.0;
    double y_L = 0.0;
    double x_M = 1.0;
    double y_M = 0.0;
};

struct StateRate {
    double dr_dt = 0.0;
    double dtheta_dt = 0.0;
};

struct Canonicalized {
    PolarState state;
    bool reflected = false;
};

/// Relative dynamics: (mu cos psi, (mu/r) sin psi - omega).
StateRate state_derivative(const PolarState& state, const ControlPair& controls,
                           const GameParams& params);

/// Same as state_derivative but takes a signed angle; used by the simulator.
StateRate state_derivative(double r, const ControlPair& controls, const GameParams& params);

/// Maps (r, theta in [-pi, pi]) onto the canonical half plane.
Canonicalized canonicalize(double r, double theta_signed);

/// Wraps any angle into (-pi, pi].
double wrap_angle(double theta);

CartesianPose to_cartesian(const PolarState& state, double man_angle);
CartesianPose to_cartesian_signed(double r, double theta_signed, double man_angle);

struct RecoveredPolar {
    double r = 0.0;
    double theta_signed = 0.0;
    double man_angle = 0.0;
};

RecoveredPolar from_cartesian(const CartesianPose& pose);

/// Mirrors controls across theta = 0: psi -> -psi, omega -> -omega.
ControlPair reflect_controls(const ControlPair& controls, bool reflected);

/// Unit heading from an angle psi measured from the outward radial.
ControlPair heading_from_angle(double psi, double omega);

/// Rotates L's heading by delta, leaving omega untouched.
ControlPair rotate_heading(const ControlPair& controls, double delta);

}  // namespace lakegame
