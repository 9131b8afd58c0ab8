#include "lakegame/classical_game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lakegame/roots.hpp"

namespace lakegame::classical {

namespace {

void require_outside_mu(double r, const GameParams& params, const char* what) {
    if (r < params.mu) {
        std::ostringstream os;
        os << what << ": the classical strategy is only defined for r >= mu (r = " << r
           << ", mu = " << params.mu << ")";
        fail(ErrorCode::UndefinedRegion, os.str());
    }
}

// sqrt(r^2/mu^2 - 1) - acos(mu/r), the r-dependent part of the classical value.
double radial_term(double r, double mu) {
    const double q = std::max(0.0, r * r / (mu * mu) - 1.0);
    return std::sqrt(q) - std::acos(std::min(1.0, mu / r));
}

}  // namespace

ControlPair classical_heading(const PolarState& state, const GameParams& params) {
    require_outside_mu(state.r, params, "classical_heading");
    const double sin_psi = params.mu / state.r;
    const double cos_psi = std::sqrt(std::max(0.0, 1.0 - sin_psi * sin_psi));
    return {cos_psi, sin_psi, 1.0, false};
}

double classical_value(const PolarState& state, const GameParams& params) {
    require_outside_mu(state.r, params, "classical_value");
    const double mu = params.mu;
    return state.theta - std::sqrt(1.0 / (mu * mu) - 1.0) + std::acos(mu) +
           radial_term(state.r, mu);
}

ClassicalSolution classical_solution(const PolarState& state, const GameParams& params) {
    return {classical_value(state, params), classical_heading(state, params)};
}

double theta_T(double mu) {
    return kPi - std::sqrt(1.0 / (mu * mu) - 1.0) + std::acos(mu);
}

double theta_T(const GameParams& params) { return theta_T(params.mu); }

double critical_mu(const GameParams& params) {
    // theta_T runs from -inf at mu -> 0 to pi at mu = 1.
    const auto f = [](double mu) { return theta_T(mu); };
    const auto brackets = roots::scan(f, 1e-3, 1.0, 64, true);
    if (brackets.empty()) {
        fail(ErrorCode::NoRoot, "theta_T has no sign change on (0, 1)");
    }
    return roots::bisect(f, brackets.front(), params.tol_root);
}

double barrier_theta(double r, const GameParams& params) {
    if (!(r >= params.mu && r <= 1.0)) {
        std::ostringstream os;
        os << "barrier is defined on [mu, 1], got r = " << r;
        fail(ErrorCode::Domain, os.str());
    }
    return kPi - radial_term(r, params.mu);
}

BarrierPoint barrier_point(double r, const GameParams& params) {
    return {r, barrier_theta(r, params)};
}

double barrier_slope(double r, const GameParams& params) {
    const double mu = params.mu;
    // d/dr[-sqrt(r^2/mu^2 - 1)] + d/dr[acos(mu/r)]
    const double root_q = std::sqrt(r * r / (mu * mu) - 1.0);
    const double root_p = std::sqrt(1.0 - mu * mu / (r * r));
    return -(r / (mu * mu)) / root_q + (mu / (r * r)) / root_p;
}

double barrier_residual(double r, const GameParams& params, double offset) {
    if (!(r > params.mu && r <= 1.0)) {
        std::ostringstream os;
        os << "barrier residual is defined on (mu, 1], got r = " << r;
        fail(ErrorCode::Domain, os.str());
    }
    (void)offset;  // the dynamics do not depend on theta
    const double mu = params.mu;
    const double slope = barrier_slope(r, params);
    // Normal n = (-slope, 1). M minimizes with omega = 1; L maximizes
    // -slope*mu*cos + (mu/r)*sin, attained along (-slope, 1/r).
    const double norm = std::hypot(slope, 1.0 / r);
    const double cos_psi = -slope / norm;
    const double sin_psi = (1.0 / r) / norm;
    const double omega = 1.0;
    const double r_dot = mu * cos_psi;
    const double theta_dot = (mu / r) * sin_psi - omega;
    return -slope * r_dot + theta_dot;
}

BarrierSide classify_vs_barrier(const PolarState& state, const GameParams& params) {
    if (state.r < params.mu) {
        return BarrierSide::Below;
    }
    const double b = barrier_theta(std::min(state.r, 1.0), params);
    const double gap = state.theta - b;
    if (std::abs(gap) <= params.tol_event) return BarrierSide::On;
    return gap > 0.0 ? BarrierSide::Above : BarrierSide::Below;
}

double classical_flow(double r_from, double theta_from, double r_to, const GameParams& params) {
    require_outside_mu(r_from, params, "classical_flow");
    require_outside_mu(r_to, params, "classical_flow");
    const double mu = params.mu;
    return theta_from - (radial_term(r_to, mu) - radial_term(r_from, mu));
}

}  // namespace lakegame::classical

namespace lakegame {

bool GameParams::subcritical() const { return classical::theta_T(mu) <= 0.0; }

}  // namespace lakegame
