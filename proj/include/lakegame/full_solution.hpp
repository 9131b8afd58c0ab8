#pragma once

// Stitched solution over the whole canonical state space: the classical
// terminal-angle game above the barrier, and the min-max time to reach the
// antipodal point E = (mu, pi) below it.

#include <optional>
#include <string_view>
#include <vector>

#include "lakegame/core_model.hpp"
#include "lakegame/min_time_focal.hpp"

namespace lakegame {

enum class RegionLabel {
    AboveBarrier,
    OnBarrier,
    FocalLine,
    UniversalLine,
    FocalTributary,
    UniversalTributary,
    AntipodalPoint,
    Shore,
};

enum class ValueKind { TimeToE, TerminalAngle };

std::string_view to_string(RegionLabel label);
std::string_view to_string(ValueKind kind);
std::string_view to_string(focal::EntryCase c);

struct StrategyAdvice {
    RegionLabel region = RegionLabel::Shore;
    ControlPair controls;
    double value = 0.0;
    ValueKind value_kind = ValueKind::TimeToE;
    std::optional<focal::EntrySolution> entry;
};

/// Region of a canonical state. Priority: Shore, AntipodalPoint, barrier
/// (r >= mu), FocalLine, UniversalLine, UniversalTributary, FocalTributary.
/// The centre disc r < eps_r is the UL's end point and labelled UniversalLine.
RegionLabel classify(const PolarState& state, const GameParams& params);

bool is_below_barrier_region(RegionLabel label);

/// M's equilibrium rate in the canonical half plane for a region.
double equilibrium_omega(RegionLabel label, bool* arbitrary = nullptr);

struct AdviseOptions {
    /// M's instantaneous rate; required on the focal line.
    std::optional<double> omega_now;
    /// Previous entry solution for the local root search.
    const focal::EntrySolution* entry_hint = nullptr;
    bool record_all_roots = false;
};

StrategyAdvice advise(const PolarState& state, const GameParams& params,
                      const AdviseOptions& options = {});

struct GridCell {
    double r = 0.0;
    double theta = 0.0;
    std::optional<RegionLabel> region;
    std::optional<double> value;
    std::optional<ValueKind> value_kind;
    std::string error;
};

struct ValueGrid {
    std::size_t n_r = 0;
    std::size_t n_theta = 0;
    std::vector<GridCell> cells;  // row-major: index = i_r * n_theta + i_theta

    const GridCell& at(std::size_t i_r, std::size_t i_theta) const {
        return cells[i_r * n_theta + i_theta];
    }
};

/// advise on a uniform grid over [eps_r, 1] x [0, pi]; per-cell failures are
/// recorded, never thrown. Cells are evaluated on `threads` workers
/// (0 = hardware concurrency).
ValueGrid value_grid(const GameParams& params, std::size_t n_r, std::size_t n_theta,
                     unsigned threads = 0);

}  // namespace lakegame
