#include "lakegame/min_time_focal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lakegame/classical_game.hpp"
#include "lakegame/roots.hpp"

namespace lakegame::focal {

namespace {

// Radicands that are negative only through rounding are clamped; anything
// larger is a genuine domain violation.
constexpr double kRadicandSlack = 1e-12;

double checked_sqrt(double x, const char* what) {
    if (x < -kRadicandSlack) {
        std::ostringstream os;
        os << what << ": negative square-root argument " << x;
        fail(ErrorCode::Domain, os.str());
    }
    return std::sqrt(std::max(0.0, x));
}

double clamped_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

void require_entry_radius(double s, const GameParams& params, const char* what) {
    if (!(s > 0.0 && s <= params.mu)) {
        std::ostringstream os;
        os << what << ": entry radius s = " << s << " outside (0, mu]";
        fail(ErrorCode::Domain, os.str());
    }
}

EntrySolution make_solution(const PolarState& state, double s, EntryCase c,
                            const GameParams& params) {
    const auto times = arrival_times(state, s, c, params);
    EntrySolution sol;
    sol.s = s;
    sol.case_tag = c;
    sol.t_L = times.t_L;
    sol.t_M = times.t_M;
    sol.total_time = times.t_L + time_on_fl(s, params);
    return sol;
}

void require_tributary_region(const PolarState& state, const GameParams& params) {
    const bool above_partition = state.theta > state.r / params.mu;
    const bool below_fl = state.theta < kPi;
    bool below_barrier = true;
    if (state.r >= params.mu) {
        below_barrier = state.theta < classical::barrier_theta(std::min(state.r, 1.0), params);
    }
    if (!(above_partition && below_fl && below_barrier) || state.r <= 0.0) {
        std::ostringstream os;
        os << "state (" << state.r << ", " << state.theta
           << ") is outside the focal-tributary region";
        fail(ErrorCode::Region, os.str());
    }
}

}  // namespace

ControlPair fl_control(const PolarState& state, double omega_now, const GameParams& params) {
    if (std::abs(state.theta - kPi) > params.tol_event) {
        std::ostringstream os;
        os << "fl_control: theta = " << state.theta << " is not on the focal line";
        fail(ErrorCode::OffFocalLine, os.str());
    }
    if (state.r > params.mu + params.tol_event) {
        std::ostringstream os;
        os << "fl_control: r = " << state.r << " exceeds mu";
        fail(ErrorCode::Domain, os.str());
    }
    if (!(std::abs(omega_now) <= 1.0)) {
        fail(ErrorCode::Domain, "fl_control: |omega| must not exceed 1");
    }
    const double sin_psi = std::clamp(omega_now * state.r / params.mu, -1.0, 1.0);
    return {std::sqrt(std::max(0.0, 1.0 - sin_psi * sin_psi)), sin_psi, omega_now, false};
}

double time_on_fl(double s, const GameParams& params) {
    if (!(s >= 0.0 && s <= params.mu)) {
        std::ostringstream os;
        os << "time_on_fl: s = " << s << " outside [0, mu]";
        fail(ErrorCode::Domain, os.str());
    }
    return kPi / 2.0 - std::asin(s / params.mu);
}

ControlPair fl_tributary_heading(const PolarState& state, double s, Phase phase,
                                 const GameParams& params) {
    require_entry_radius(s, params, "fl_tributary_heading");
    const double tangent_radius = s * s / params.mu;
    if (state.r < tangent_radius - params.tol_event) {
        std::ostringstream os;
        os << "fl_tributary_heading: r = " << state.r << " lies inside the tangent circle "
           << tangent_radius;
        fail(ErrorCode::Domain, os.str());
    }
    const double sin_psi = std::min(1.0, tangent_radius / state.r);
    const double magnitude = std::sqrt(std::max(0.0, 1.0 - sin_psi * sin_psi));
    const double cos_psi = phase == Phase::PreTangent ? -magnitude : magnitude;
    return {cos_psi, sin_psi, 1.0, false};
}

FlowfieldSample fl_flowfield(double s, double tau, const GameParams& params) {
    require_entry_radius(s, params, "fl_flowfield");
    if (!(tau >= 0.0)) {
        fail(ErrorCode::Domain, "fl_flowfield: retrograde time must be non-negative");
    }
    const double mu = params.mu;
    const double r2 = s * s - 2.0 * tau * s * std::sqrt(mu * mu - s * s) + mu * mu * tau * tau;
    const double ratio = mu * mu / (s * s);
    const double k = std::sqrt(std::max(0.0, ratio - 1.0));
    const double theta = kPi + tau - std::atan(ratio * tau - k) - std::atan(k);
    return {tau, std::sqrt(std::max(0.0, r2)), theta, s};
}

double tau_bar(double s, const GameParams& params) {
    require_entry_radius(s, params, "tau_bar");
    const double a = s / params.mu;
    return a * std::sqrt(1.0 - a * a);
}

ArrivalTimes arrival_times(const PolarState& state, double s, EntryCase case_tag,
                           const GameParams& params) {
    require_entry_radius(s, params, "arrival_times");
    const double mu = params.mu;
    const double r = state.r;
    const double c = s * s / mu;  // tangent-circle radius
    const double leg_r = checked_sqrt(r * r - c * c, "arrival_times");
    const double leg_s = checked_sqrt(s * s - c * c, "arrival_times");
    const double sweep_r = r > 0.0 ? clamped_acos(c / r) : 0.0;
    const double sweep_s = clamped_acos(s / mu);

    if (case_tag == EntryCase::One) {
        return {(leg_r + leg_s) / mu, state.theta + sweep_r + sweep_s - kPi};
    }
    if (s < r - kRadicandSlack) {
        std::ostringstream os;
        os << "arrival_times: Case Two needs s >= r (s = " << s << ", r = " << r << ")";
        fail(ErrorCode::Domain, os.str());
    }
    return {(leg_s - leg_r) / mu, state.theta - sweep_r + sweep_s - kPi};
}

double arrival_gap(const PolarState& state, double s, EntryCase case_tag,
                   const GameParams& params) {
    const auto t = arrival_times(state, s, case_tag, params);
    return t.t_L - t.t_M;
}

ScanDomain case_domain(const PolarState& state, EntryCase case_tag, const GameParams& params) {
    const double upper = std::min(params.mu, std::sqrt(params.mu * state.r));
    if (case_tag == EntryCase::One) {
        return {0.0, upper};
    }
    return {std::max(state.r, 0.0), upper};
}

namespace {

// The grid includes s = 0, where delta takes its limiting value r/mu - theta.
double gap_or_limit(const PolarState& state, double s, EntryCase c, const GameParams& params) {
    if (s <= 0.0) {
        return state.r / params.mu - state.theta;
    }
    return arrival_gap(state, s, c, params);
}

std::optional<EntrySolution> solve_case(const PolarState& state, EntryCase c,
                                        const GameParams& params, const SolveOptions& options) {
    const auto dom = case_domain(state, c, params);
    if (dom.empty()) {
        return std::nullopt;
    }
    const auto f = [&](double s) { return gap_or_limit(state, s, c, params); };
    const auto found =
        roots::find_all(f, dom.lo, dom.hi, options.grid_points, params.tol_root,
                        !options.record_all_roots);
    for (double s : found) {
        if (s > 0.0) {
            auto sol = make_solution(state, s, c, params);
            if (options.record_all_roots) {
                sol.all_roots = found;
            }
            return sol;
        }
    }
    return std::nullopt;
}

std::optional<EntrySolution> refine_case(const PolarState& state, double s0, EntryCase c,
                                         const GameParams& params) {
    const auto dom = case_domain(state, c, params);
    if (dom.empty() || !(dom.hi > 0.0)) {
        return std::nullopt;
    }
    const auto f = [&](double s) { return gap_or_limit(state, s, c, params); };
    const double centre = std::clamp(s0, dom.lo, dom.hi);
    const double f_centre = f(centre);
    if (f_centre == 0.0 && centre > 0.0) {
        return make_solution(state, centre, c, params);
    }
    for (double w = 1e-6; w < 1.0; w *= 16.0) {
        const double a = std::max(dom.lo, centre - w);
        const double b = std::min(dom.hi, centre + w);
        const double fa = f(a);
        const double fb = f(b);
        std::optional<roots::Bracket> pick;
        if (a < centre && fa * f_centre <= 0.0) {
            pick = roots::Bracket{a, centre, fa, f_centre};
        } else if (b > centre && fb * f_centre <= 0.0) {
            pick = roots::Bracket{centre, b, f_centre, fb};
        }
        if (pick) {
            const double s = roots::bisect(f, *pick, params.tol_root);
            if (s > 0.0) {
                return make_solution(state, s, c, params);
            }
            return std::nullopt;
        }
        if (a <= dom.lo && b >= dom.hi) {
            break;
        }
    }
    return std::nullopt;
}

}  // namespace

EntrySolution solve_entry(const PolarState& state, const GameParams& params,
                          const SolveOptions& options) {
    // degenerate Case Two: already on the FL, enter where L stands
    if (std::abs(state.theta - kPi) <= params.tol_event && state.r > 0.0 &&
        state.r <= params.mu) {
        return make_solution(state, state.r, EntryCase::Two, params);
    }
    require_tributary_region(state, params);
    if (auto one = solve_case(state, EntryCase::One, params, options)) {
        return *one;
    }
    if (auto two = solve_case(state, EntryCase::Two, params, options)) {
        return *two;
    }
    std::ostringstream os;
    os << "no focal-line entry point for state (" << state.r << ", " << state.theta << ")";
    fail(ErrorCode::NoRoot, os.str());
}

EntrySolution solve_entry_near(const PolarState& state, const EntrySolution& hint,
                               const GameParams& params) {
    require_tributary_region(state, params);
    const EntryCase first = hint.case_tag;
    const EntryCase second = first == EntryCase::One ? EntryCase::Two : EntryCase::One;
    if (auto sol = refine_case(state, hint.s, first, params)) {
        return *sol;
    }
    if (auto sol = refine_case(state, hint.s, second, params)) {
        return *sol;
    }
    return solve_entry(state, params);
}

}  // namespace lakegame::focal
