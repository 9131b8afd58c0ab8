#include "lakegame/min_time_universal.hpp"

#include <cmath>
#include <sstream>

#include "lakegame/min_time_focal.hpp"

namespace lakegame::universal {

namespace {

void require_ul_region(const PolarState& state, const GameParams& params, const char* what) {
    if (!in_ul_region(state, params)) {
        std::ostringstream os;
        os << what << ": theta = " << state.theta << " exceeds r/mu = " << state.r / params.mu;
        fail(ErrorCode::Region, os.str());
    }
}

}  // namespace

bool in_ul_region(const PolarState& state, const GameParams& params) {
    return state.theta <= state.r / params.mu + params.tol_event;
}

ControlPair ul_control(const PolarState& state, const GameParams& params) {
    if (std::abs(state.theta) > params.tol_event) {
        std::ostringstream os;
        os << "ul_control: theta = " << state.theta << " is not on the universal line";
        fail(ErrorCode::OffUniversalLine, os.str());
    }
    return {-1.0, 0.0, 0.0, false};
}

ControlPair ul_tributary_heading(const PolarState& state, const GameParams& params) {
    require_ul_region(state, params, "ul_tributary_heading");
    return {-1.0, 0.0, 1.0, true};
}

double ul_time_to_E(const PolarState& state, const GameParams& params) {
    require_ul_region(state, params, "ul_time_to_E");
    return state.r / params.mu + focal::time_on_fl(0.0, params);
}

UlSample ul_flowfield(double tau, const GameParams& params, double r0) {
    if (!(tau >= 0.0) || !(r0 >= 0.0 && r0 < 1.0)) {
        fail(ErrorCode::Domain, "ul_flowfield: need tau >= 0 and r0 in [0, 1)");
    }
    return {tau, r0 + params.mu * tau, tau, r0};
}

}  // namespace lakegame::universal
