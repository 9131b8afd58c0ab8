#include "lakegame/full_solution.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "lakegame/classical_game.hpp"
#include "lakegame/min_time_universal.hpp"

namespace lakegame {

std::string_view to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::AboveBarrier: return "AboveBarrier";
        case RegionLabel::OnBarrier: return "OnBarrier";
        case RegionLabel::FocalLine: return "FocalLine";
        case RegionLabel::UniversalLine: return "UniversalLine";
        case RegionLabel::FocalTributary: return "FocalTributary";
        case RegionLabel::UniversalTributary: return "UniversalTributary";
        case RegionLabel::AntipodalPoint: return "AntipodalPoint";
        case RegionLabel::Shore: return "Shore";
    }
    return "Unknown";
}

std::string_view to_string(ValueKind kind) {
    return kind == ValueKind::TimeToE ? "TimeToE" : "TerminalAngle";
}

std::string_view to_string(focal::EntryCase c) {
    return c == focal::EntryCase::One ? "One" : "Two";
}

RegionLabel classify(const PolarState& state, const GameParams& params) {
    const double tol = params.tol_event;
    const double r = state.r;
    const double theta = state.theta;
    if (r >= 1.0 - tol) {
        return RegionLabel::Shore;
    }
    if (std::abs(r - params.mu) <= tol && std::abs(theta - kPi) <= tol) {
        return RegionLabel::AntipodalPoint;
    }
    if (r >= params.mu) {
        switch (classical::classify_vs_barrier(state, params)) {
            case classical::BarrierSide::Above: return RegionLabel::AboveBarrier;
            case classical::BarrierSide::On: return RegionLabel::OnBarrier;
            case classical::BarrierSide::Below: break;
        }
    }
    if (r < params.eps_r) {
        return RegionLabel::UniversalLine;
    }
    if (std::abs(theta - kPi) <= tol && r < params.mu) {
        return RegionLabel::FocalLine;
    }
    if (theta <= tol) {
        return RegionLabel::UniversalLine;
    }
    if (universal::in_ul_region(state, params)) {
        return RegionLabel::UniversalTributary;
    }
    return RegionLabel::FocalTributary;
}

bool is_below_barrier_region(RegionLabel label) {
    switch (label) {
        case RegionLabel::FocalLine:
        case RegionLabel::UniversalLine:
        case RegionLabel::FocalTributary:
        case RegionLabel::UniversalTributary:
        case RegionLabel::AntipodalPoint:
            return true;
        default:
            return false;
    }
}

double equilibrium_omega(RegionLabel label, bool* arbitrary) {
    if (arbitrary) *arbitrary = label == RegionLabel::UniversalTributary;
    return label == RegionLabel::UniversalLine ? 0.0 : 1.0;
}

StrategyAdvice advise(const PolarState& state, const GameParams& params,
                      const AdviseOptions& options) {
    StrategyAdvice out;
    out.region = classify(state, params);
    switch (out.region) {
        case RegionLabel::Shore:
        case RegionLabel::AboveBarrier:
        case RegionLabel::OnBarrier: {
            const PolarState on_lake{std::min(state.r, 1.0), state.theta};
            const auto sol = classical::classical_solution(on_lake, params);
            out.controls = sol.controls;
            out.value = sol.value;
            out.value_kind = ValueKind::TerminalAngle;
            break;
        }
        case RegionLabel::AntipodalPoint: {
            const double omega = options.omega_now.value_or(1.0);
            out.controls = focal::fl_control({params.mu, kPi}, omega, params);
            out.value = 0.0;
            break;
        }
        case RegionLabel::FocalLine: {
            if (!options.omega_now) {
                fail(ErrorCode::MissingOmega,
                     "the focal-line strategy needs M's instantaneous rate");
            }
            out.controls = focal::fl_control(state, *options.omega_now, params);
            out.value = focal::time_on_fl(state.r, params);
            break;
        }
        case RegionLabel::UniversalLine: {
            out.controls = state.r < params.eps_r ? ControlPair{-1.0, 0.0, 0.0, false}
                                                  : universal::ul_control(state, params);
            out.value = state.r / params.mu + focal::time_on_fl(0.0, params);
            break;
        }
        case RegionLabel::UniversalTributary: {
            out.controls = universal::ul_tributary_heading(state, params);
            out.value = universal::ul_time_to_E(state, params);
            break;
        }
        case RegionLabel::FocalTributary: {
            focal::EntrySolution entry;
            if (options.entry_hint) {
                entry = focal::solve_entry_near(state, *options.entry_hint, params);
            } else {
                focal::SolveOptions so;
                so.record_all_roots = options.record_all_roots;
                entry = focal::solve_entry(state, params, so);
            }
            out.controls = focal::fl_tributary_heading(state, entry.s,
                                                       focal::phase_of(entry.case_tag), params);
            out.value = entry.total_time;
            out.entry = std::move(entry);
            break;
        }
    }
    return out;
}

ValueGrid value_grid(const GameParams& params, std::size_t n_r, std::size_t n_theta,
                     unsigned threads) {
    if (n_r < 2 || n_theta < 2) {
        fail(ErrorCode::Domain, "value_grid needs at least 2 points per axis");
    }
    ValueGrid grid;
    grid.n_r = n_r;
    grid.n_theta = n_theta;
    grid.cells.resize(n_r * n_theta);
    for (std::size_t i = 0; i < n_r; ++i) {
        const double r = params.eps_r + (1.0 - params.eps_r) * static_cast<double>(i) /
                                            static_cast<double>(n_r - 1);
        for (std::size_t j = 0; j < n_theta; ++j) {
            auto& cell = grid.cells[i * n_theta + j];
            cell.r = i + 1 == n_r ? 1.0 : r;
            cell.theta = j + 1 == n_theta ? kPi
                                          : kPi * static_cast<double>(j) /
                                                static_cast<double>(n_theta - 1);
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < grid.cells.size(); k = next++) {
            auto& cell = grid.cells[k];
            try {
                const PolarState state{cell.r, cell.theta};
                cell.region = classify(state, params);
                AdviseOptions opts;
                opts.omega_now = 1.0;
                const auto adv = advise(state, params, opts);
                if (std::isfinite(adv.value)) {
                    cell.value = adv.value;
                    cell.value_kind = adv.value_kind;
                } else {
                    cell.error = "non-finite value";
                }
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    unsigned n_workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    return grid;
}

}  // namespace lakegame
