#pragma once

// Equilibrium flowfields in the (r, theta) rectangle and the Cartesian
// focal-tributary figure, as plain polylines ready for CSV or SVG output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lakegame/core_model.hpp"
#include "lakegame/full_solution.hpp"

namespace lakegame::io {

enum class Game { Classical, Time, Tributary };

std::string_view to_string(Game game);
using lakegame::to_string;

struct Polyline {
    std::string id;
    RegionLabel region = RegionLabel::FocalTributary;
    /// tributary, partition, barrier, singular, classical
    std::string kind;
    std::vector<PolarState> points;
    /// Entry radius s, UL leave radius r0 or fan start radius.
    std::optional<double> seed;
};

struct Flowfield {
    Game game = Game::Time;
    double mu = 0.0;
    std::vector<Polyline> lines;

    std::size_t count(std::string_view kind) const;
    const Polyline* find_kind(std::string_view kind) const;
};

struct FlowfieldOptions {
    std::size_t s_grid = 20;
    std::size_t ul_grid = 10;
    std::size_t fan_grid = 15;
    /// Retrograde step for the FL tributaries.
    double dtau = 0.005;
    std::size_t points = 120;  // per UL tributary, fan and barrier
};

/// s_i = 0.02 mu 50^(i/(n+1)), i = 1..n: geometric over (0.02 mu, mu).
std::vector<double> fl_seed_radii(double mu, std::size_t n);
/// r0_i = i/(n+1), i = 1..n.
std::vector<double> ul_seed_radii(std::size_t n);

/// Barrier B plus classical trajectories fanning out from the dispersal
/// line theta = pi at r0 in (mu, 1) to the shore. Below B is left empty.
Flowfield classical_flowfield(const GameParams& params, const FlowfieldOptions& options = {});

/// FL tributaries (retrograde from each s until the partition, the shore or
/// the barrier), the FL and UL, the partition, UL tributaries, the barrier
/// and the classical fans above it.
Flowfield time_flowfield(const GameParams& params, const FlowfieldOptions& options = {});

/// Header trajectory,region,kind,seed,r,theta; one row per point.
void write_flowfield_csv(std::ostream& out, const Flowfield& field);

struct CartesianPoint {
    double x = 0.0;
    double y = 0.0;
};

struct CartesianPath {
    std::string id;
    /// lady or man
    std::string kind;
    std::string label;  // "Case One" / "Case Two"
    std::vector<CartesianPoint> points;
    CartesianPoint start;
    std::optional<CartesianPoint> fl_entry;
    CartesianPoint end;
};

struct TributaryFigure {
    double mu = 0.0;
    std::vector<CartesianPath> paths;
};

/// Equilibrium runs from one Case One and one Case Two start in the
/// non-rotating frame (M starts at (1, 0)).
TributaryFigure tributary_figure(const GameParams& params, double dt = 1e-4);

}  // namespace lakegame::io
