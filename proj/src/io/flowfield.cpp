#include "lakegame/io/flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "lakegame/classical_game.hpp"
#include "lakegame/io/csv.hpp"
#include "lakegame/min_time_focal.hpp"
#include "lakegame/min_time_universal.hpp"
#include "lakegame/simulator.hpp"

namespace lakegame::io {

std::string_view to_string(Game game) {
    switch (game) {
        case Game::Classical: return "classical";
        case Game::Time: return "time";
        case Game::Tributary: return "tributary";
    }
    return "unknown";
}

std::size_t Flowfield::count(std::string_view kind) const {
    return static_cast<std::size_t>(std::count_if(
        lines.begin(), lines.end(), [&](const Polyline& p) { return p.kind == kind; }));
}

const Polyline* Flowfield::find_kind(std::string_view kind) const {
    for (const auto& p : lines) {
        if (p.kind == kind) return &p;
    }
    return nullptr;
}

std::vector<double> fl_seed_radii(double mu, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(0.02 * mu *
                      std::pow(50.0, static_cast<double>(i) / static_cast<double>(n + 1)));
    }
    return out;
}

std::vector<double> ul_seed_radii(std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(static_cast<double>(i) / static_cast<double>(n + 1));
    }
    return out;
}

namespace {

// Below the barrier, inside the lake and on the canonical half plane.
bool below_barrier(const PolarState& p, const GameParams& params) {
    if (!(p.r < 1.0) || p.theta < 0.0 || p.theta > kPi) return false;
    if (p.r < params.mu) return true;
    return p.theta < classical::barrier_theta(p.r, params);
}

// Largest tau in [lo, hi] with inside(tau), given inside(lo) and !inside(hi).
double last_inside(const std::function<bool(double)>& inside, double lo, double hi) {
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = i + 1 == n ? b
                            : a + (b - a) * static_cast<double>(i) /
                                      static_cast<double>(n - 1);
    }
    return out;
}

Polyline barrier_line(const GameParams& params, std::size_t n) {
    Polyline line{"barrier", RegionLabel::OnBarrier, "barrier", {}, std::nullopt};
    for (const double r : linspace(params.mu, 1.0, n)) {
        const double theta = classical::barrier_theta(r, params);
        if (theta < 0.0) break;  // subcritical: B reaches the UL before the shore
        line.points.push_back({r, theta});
    }
    return line;
}

std::vector<Polyline> classical_fans(const GameParams& params, const FlowfieldOptions& o) {
    std::vector<Polyline> out;
    const double mu = params.mu;
    for (std::size_t i = 1; i <= o.fan_grid; ++i) {
        const double r0 = mu + (1.0 - mu) * static_cast<double>(i) /
                                   static_cast<double>(o.fan_grid + 1);
        Polyline line{"fan-" + std::to_string(i), RegionLabel::AboveBarrier, "classical", {}, r0};
        for (const double r : linspace(r0, 1.0, o.points)) {
            const double theta = classical::classical_flow(r0, kPi, r, params);
            if (theta < 0.0) break;
            line.points.push_back({r, theta});
        }
        out.push_back(std::move(line));
    }
    return out;
}

Polyline fl_tributary(double s, std::size_t index, const GameParams& params, double dtau) {
    const double mu = params.mu;
    Polyline line{"fl-" + std::to_string(index), RegionLabel::FocalTributary, "tributary", {}, s};
    const auto at = [&](double tau) {
        const auto f = focal::fl_flowfield(s, tau, params);
        return PolarState{f.r, f.theta};
    };
    const auto inside = [&](double tau) {
        const PolarState p = at(tau);
        return p.theta > p.r / mu && below_barrier(p, params);
    };
    line.points.push_back(at(0.0));
    const double tau_cap = 4.0 / mu + 2.0 * kPi;
    for (double tau = dtau; tau < tau_cap; tau += dtau) {
        if (!inside(tau)) {
            line.points.push_back(at(last_inside(inside, tau - dtau, tau)));
            break;
        }
        line.points.push_back(at(tau));
    }
    return line;
}

Polyline ul_tributary(double r0, std::string id, std::string kind, const GameParams& params,
                      std::size_t n) {
    Polyline line{std::move(id), RegionLabel::UniversalTributary, std::move(kind), {}, r0};
    const auto at = [&](double tau) {
        const auto u = universal::ul_flowfield(tau, params, r0);
        return PolarState{u.r, u.theta};
    };
    const auto inside = [&](double tau) { return below_barrier(at(tau), params); };
    double hi = std::min((1.0 - r0) / params.mu, kPi) * (1.0 + 1e-9) + 1e-12;
    const double tau_end = inside(hi) ? hi : last_inside(inside, 0.0, hi);
    for (const double tau : linspace(0.0, tau_end, n)) {
        line.points.push_back(at(tau));
    }
    return line;
}

}  // namespace

Flowfield classical_flowfield(const GameParams& params, const FlowfieldOptions& options) {
    params.validate();
    Flowfield field{Game::Classical, params.mu, {}};
    field.lines.push_back(barrier_line(params, options.points));
    for (auto& fan : classical_fans(params, options)) field.lines.push_back(std::move(fan));
    return field;
}

Flowfield time_flowfield(const GameParams& params, const FlowfieldOptions& options) {
    params.validate();
    if (!(options.dtau > 0.0) || options.points < 2) {
        fail(ErrorCode::Domain, "flowfield needs dtau > 0 and at least 2 points per line");
    }
    const double mu = params.mu;
    Flowfield field{Game::Time, mu, {}};
    std::size_t k = 0;
    for (const double s : fl_seed_radii(mu, options.s_grid)) {
        field.lines.push_back(fl_tributary(s, ++k, params, options.dtau));
    }
    field.lines.push_back(
        {"focal-line", RegionLabel::FocalLine, "singular", {{0.0, kPi}, {mu, kPi}}, std::nullopt});
    field.lines.push_back({"universal-line",
                           RegionLabel::UniversalLine,
                           "singular",
                           {{1.0, 0.0}, {0.0, 0.0}},
                           std::nullopt});
    field.lines.push_back(ul_tributary(0.0, "partition", "partition", params, options.points));
    k = 0;
    for (const double r0 : ul_seed_radii(options.ul_grid)) {
        field.lines.push_back(
            ul_tributary(r0, "ul-" + std::to_string(++k), "tributary", params, options.points));
    }
    field.lines.push_back(barrier_line(params, options.points));
    for (auto& fan : classical_fans(params, options)) field.lines.push_back(std::move(fan));
    return field;
}

void write_flowfield_csv(std::ostream& out, const Flowfield& field) {
    out << "trajectory,region,kind,seed,r,theta\n";
    for (const auto& line : field.lines) {
        const std::string seed = line.seed ? format_number(*line.seed) : std::string();
        for (const auto& p : line.points) {
            out << line.id << ',' << to_string(line.region) << ',' << line.kind << ',' << seed
                << ',' << format_number(p.r) << ',' << format_number(p.theta) << '\n';
        }
    }
}

TributaryFigure tributary_figure(const GameParams& params, double dt) {
    params.validate();
    const double mu = params.mu;
    TributaryFigure fig;
    fig.mu = mu;
    const std::vector<PolarState> starts{{2.0 * mu / 3.0, 2.0}, {mu / 6.0, 2.5}};
    sim::SimOptions so;
    so.dt = dt;
    const auto eq_l = sim::StrategySpec::equilibrium(sim::Side::Lady);
    const auto eq_m = sim::StrategySpec::equilibrium(sim::Side::Man);
    std::size_t k = 0;
    for (const auto& st : starts) {
        ++k;
        const auto traj = sim::simulate(st, eq_l, eq_m, params, so);
        if (traj.samples.empty()) continue;
        std::string label = "Case ?";
        if (classify(st, params) == RegionLabel::FocalTributary) {
            label = focal::solve_entry(st, params).case_tag == focal::EntryCase::One ? "Case One"
                                                                                    : "Case Two";
        }
        CartesianPath lady{"lady-" + std::to_string(k), "lady", label, {}, {}, std::nullopt, {}};
        CartesianPath man{"man-" + std::to_string(k), "man", label, {}, {}, std::nullopt, {}};
        const auto* entry = traj.first(sim::EventKind::FocalLineEntry);
        double next_t = 0.0;
        const sim::Sample* at_entry = nullptr;
        for (const auto& s : traj.samples) {
            if (entry && !at_entry && s.t >= entry->t) at_entry = &s;
            if (s.t + 1e-12 < next_t && &s != &traj.samples.back()) continue;
            next_t = s.t + 0.005;
            lady.points.push_back({s.pose.x_L, s.pose.y_L});
            man.points.push_back({s.pose.x_M, s.pose.y_M});
        }
        const auto& first = traj.samples.front().pose;
        const auto& last = traj.samples.back().pose;
        lady.start = {first.x_L, first.y_L};
        man.start = {first.x_M, first.y_M};
        lady.end = {last.x_L, last.y_L};
        man.end = {last.x_M, last.y_M};
        if (at_entry) {
            lady.fl_entry = CartesianPoint{at_entry->pose.x_L, at_entry->pose.y_L};
            man.fl_entry = CartesianPoint{at_entry->pose.x_M, at_entry->pose.y_M};
        }
        fig.paths.push_back(std::move(lady));
        fig.paths.push_back(std::move(man));
    }
    return fig;
}

}  // namespace lakegame::io
