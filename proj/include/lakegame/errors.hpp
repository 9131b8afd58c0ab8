#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lakegame {

enum class ErrorCode {
    InvalidParams,      // mu or tolerances out of range
    Domain,             // argument outside the formula's domain
    RadiusBelowCutoff,  // r < eps_r where theta dynamics are singular
    UndefinedRegion,    // classical strategy queried with r < mu
    OffFocalLine,       // FL control queried away from theta = pi
    OffUniversalLine,   // UL control queried away from theta = 0
    Region,             // state outside the region an operation serves
    NoRoot,             // entry-point solve found no sign change
    MissingOmega,       // FL strategy needs M's instantaneous rate
    Integration,        // NaN or non-finite state during simulation
    Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class LakeError : public std::runtime_error {
public:
    LakeError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw LakeError(code, what);
}

}  // namespace lakegame
