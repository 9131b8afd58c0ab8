#include "lakegame/core_model.hpp"

#include <cmath>
#include <sstream>

namespace lakegame {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidParams: return "invalid-params";
        case ErrorCode::Domain: return "domain";
        case ErrorCode::RadiusBelowCutoff: return "radius-below-cutoff";
        case ErrorCode::UndefinedRegion: return "undefined-region";
        case ErrorCode::OffFocalLine: return "off-focal-line";
        case ErrorCode::OffUniversalLine: return "off-universal-line";
        case ErrorCode::Region: return "region";
        case ErrorCode::NoRoot: return "no-root";
        case ErrorCode::MissingOmega: return "missing-omega";
        case ErrorCode::Integration: return "integration";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

GameParams GameParams::make(double mu, double eps_r, double tol_root, double tol_event) {
    GameParams p{mu, eps_r, tol_root, tol_event};
    p.validate();
    return p;
}

void GameParams::validate() const {
    if (!(mu > 0.0 && mu < 1.0)) {
        std::ostringstream os;
        os << "speed ratio mu must lie in (0, 1), got " << mu;
        fail(ErrorCode::InvalidParams, os.str());
    }
    if (!(eps_r > 0.0) || !(tol_root > 0.0) || !(tol_event > 0.0)) {
        fail(ErrorCode::InvalidParams, "eps_r, tol_root and tol_event must be positive");
    }
}

void ControlPair::validate() const {
    if (std::abs(cos_psi * cos_psi + sin_psi * sin_psi - 1.0) > 1e-12) {
        fail(ErrorCode::Domain, "heading is not a unit vector");
    }
    if (!(std::abs(omega) <= 1.0)) {
        fail(ErrorCode::Domain, "|omega| must not exceed 1");
    }
}

StateRate state_derivative(double r, const ControlPair& controls, const GameParams& params) {
    if (r < params.eps_r) {
        std::ostringstream os;
        os << "r = " << r << " is below the cutoff " << params.eps_r;
        fail(ErrorCode::RadiusBelowCutoff, os.str());
    }
    return {params.mu * controls.cos_psi,
            (params.mu / r) * controls.sin_psi - controls.omega};
}

StateRate state_derivative(const PolarState& state, const ControlPair& controls,
                           const GameParams& params) {
    return state_derivative(state.r, controls, params);
}

Canonicalized canonicalize(double r, double theta_signed) {
    if (!(r >= 0.0 && r <= 1.0)) {
        std::ostringstream os;
        os << "radius " << r << " outside [0, 1]";
        fail(ErrorCode::Domain, os.str());
    }
    if (!(theta_signed >= -kPi && theta_signed <= kPi)) {
        std::ostringstream os;
        os << "angle " << theta_signed << " outside [-pi, pi]";
        fail(ErrorCode::Domain, os.str());
    }
    const bool reflected = theta_signed < 0.0;
    return {{r, std::abs(theta_signed)}, reflected};
}

double wrap_angle(double theta) {
    if (theta > -kPi && theta <= kPi) {
        return theta;
    }
    double w = std::remainder(theta, 2.0 * kPi);
    if (w <= -kPi) {
        w += 2.0 * kPi;
    }
    return w;
}

CartesianPose to_cartesian_signed(double r, double theta_signed, double man_angle) {
    const double lady_angle = man_angle + theta_signed;
    return {r * std::cos(lady_angle), r * std::sin(lady_angle), std::cos(man_angle),
            std::sin(man_angle)};
}

CartesianPose to_cartesian(const PolarState& state, double man_angle) {
    return to_cartesian_signed(state.r, state.theta, man_angle);
}

RecoveredPolar from_cartesian(const CartesianPose& pose) {
    const double man_angle = std::atan2(pose.y_M, pose.x_M);
    const double r = std::hypot(pose.x_L, pose.y_L);
    const double lady_angle = std::atan2(pose.y_L, pose.x_L);
    return {r, wrap_angle(lady_angle - man_angle), man_angle};
}

ControlPair reflect_controls(const ControlPair& controls, bool reflected) {
    if (!reflected) {
        return controls;
    }
    ControlPair out = controls;
    out.sin_psi = -controls.sin_psi;
    out.omega = -controls.omega;
    return out;
}

ControlPair heading_from_angle(double psi, double omega) {
    return {std::cos(psi), std::sin(psi), omega, false};
}

ControlPair rotate_heading(const ControlPair& controls, double delta) {
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    ControlPair out = controls;
    out.cos_psi = controls.cos_psi * c - controls.sin_psi * s;
    out.sin_psi = controls.sin_psi * c + controls.cos_psi * s;
    return out;
}

}  // namespace lakegame
