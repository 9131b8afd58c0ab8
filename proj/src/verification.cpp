#include "lakegame/verification.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "lakegame/classical_game.hpp"
#include "lakegame/min_time_universal.hpp"

namespace lakegame::verify {

Costate classical_costate(double r, const GameParams& params) {
    const double mu = params.mu;
    if (!(r >= mu)) {
        fail(ErrorCode::UndefinedRegion, "classical costate needs r >= mu");
    }
    Costate c;
    c.lambda_r = std::sqrt(std::max(0.0, 1.0 / (mu * mu) - 1.0 / (r * r)));
    c.lambda_theta = 1.0;
    c.nu = std::sqrt(1.0 / (mu * mu) - 1.0);
    c.game_tag = GameTag::Classical;
    return c;
}

Costate fl_costate(double r, double s, focal::Phase phase, const GameParams& params) {
    const double mu = params.mu;
    if (!(s > 0.0) || !(s < mu)) {
        fail(ErrorCode::Domain, "FL costate needs 0 < s < mu");
    }
    if (!(r > 0.0)) {
        fail(ErrorCode::RadiusBelowCutoff, "FL costate needs r > 0");
    }
    const double d = mu * mu - s * s;
    const double mag = std::sqrt(std::max(0.0, mu * mu - s * s * s * s / (r * r))) / d;
    Costate c;
    c.nu = -s * s / d;
    c.lambda_theta = c.nu;
    c.lambda_r = phase == focal::Phase::PreTangent ? mag : -mag;
    c.game_tag = GameTag::MinTimeFL;
    return c;
}

Costate ul_costate(const GameParams& params) {
    Costate c;
    c.lambda_r = 1.0 / params.mu;
    c.game_tag = GameTag::MinTimeUL;
    return c;
}

namespace {

double hamiltonian_core(const PolarState& state, const Costate& costate,
                        const ControlPair& controls, const GameParams& params) {
    const double mu = params.mu;
    const double r = std::max(state.r, params.eps_r);
    return costate.lambda_r * mu * controls.cos_psi +
           costate.lambda_theta * ((mu / r) * controls.sin_psi - controls.omega);
}

}  // namespace

double hamiltonian_classical(const PolarState& state, const Costate& costate,
                             const ControlPair& controls, const GameParams& params) {
    if (costate.game_tag != GameTag::Classical) {
        fail(ErrorCode::InvalidParams, "hamiltonian_classical needs a classical costate");
    }
    return hamiltonian_core(state, costate, controls, params);
}

double hamiltonian_min_time(const PolarState& state, const Costate& costate,
                            const ControlPair& controls, const GameParams& params) {
    if (costate.game_tag == GameTag::Classical) {
        fail(ErrorCode::InvalidParams, "hamiltonian_min_time needs a min-time costate");
    }
    return hamiltonian_core(state, costate, controls, params) + 1.0;
}

// ---------------------------------------------------------------------------
// HJI sweep

namespace {

struct CellResult {
    enum class Kind { None, Sample, Skipped, Failed, Classical } kind = Kind::None;
    double residual = 0.0;
    double nu_error = 0.0;
    PolarState state;
    RegionLabel region = RegionLabel::Shore;
};

bool min_time_region(RegionLabel label) {
    return label == RegionLabel::FocalTributary || label == RegionLabel::UniversalTributary ||
           label == RegionLabel::FocalLine || label == RegionLabel::UniversalLine ||
           label == RegionLabel::AntipodalPoint;
}

// Derivative along one axis from values at offsets -2h..2h. Probes outside
// the centre's region are unusable; returns nullopt when neither a central
// nor a one-sided stencil fits.
std::optional<double> derivative(const std::array<std::optional<double>, 5>& f, double h) {
    // f indices: 0:-2h 1:-h 2:0 3:+h 4:+2h
    if (f[1] && f[3]) {
        return (*f[3] - *f[1]) / (2.0 * h);
    }
    if (f[3] && f[4]) {
        return (-3.0 * *f[2] + 4.0 * *f[3] - *f[4]) / (2.0 * h);
    }
    if (f[1] && f[0]) {
        return (3.0 * *f[2] - 4.0 * *f[1] + *f[0]) / (2.0 * h);
    }
    return std::nullopt;
}

}  // namespace

HjiReport hji_sweep(const GameParams& params, std::size_t n_r, std::size_t n_theta, double h,
                    const HjiOptions& options) {
    params.validate();
    if (n_r < 2 || n_theta < 2) {
        fail(ErrorCode::Domain, "hji_sweep needs at least 2 points per axis");
    }
    if (!(h > 0.0) || !(h < 1e-2)) {
        fail(ErrorCode::Domain, "hji_sweep needs 0 < h < 1e-2");
    }
    const double mu = params.mu;
    const std::size_t n = n_r * n_theta;
    std::vector<CellResult> results(n);

    const auto cell_state = [&](std::size_t k) {
        const std::size_t i = k / n_theta;
        const std::size_t j = k % n_theta;
        const double r = i + 1 == n_r ? 1.0
                                      : params.eps_r + (1.0 - params.eps_r) *
                                                           static_cast<double>(i) /
                                                           static_cast<double>(n_r - 1);
        const double theta = j + 1 == n_theta ? kPi
                                              : kPi * static_cast<double>(j) /
                                                    static_cast<double>(n_theta - 1);
        return PolarState{r, theta};
    };

    const auto selected = [&](RegionLabel label) {
        if (options.only) return label == *options.only;
        return min_time_region(label);
    };

    const auto evaluate = [&](std::size_t k) {
        CellResult out;
        const PolarState c = cell_state(k);
        out.state = c;
        const RegionLabel region = classify(c, params);
        out.region = region;

        const bool classical_cell = region == RegionLabel::AboveBarrier;
        if (classical_cell && options.include_classical && !options.only) {
            // V is affine in theta with unit slope; only dV/dr is differenced
            if (c.r - 2.0 * h < mu || c.r + 2.0 * h > 1.0) {
                return out;
            }
            const auto value_at = [&](double r) {
                return classical::classical_value({r, c.theta}, params);
            };
            Costate co;
            co.lambda_r = (value_at(c.r + h) - value_at(c.r - h)) / (2.0 * h);
            co.lambda_theta = 1.0;
            co.game_tag = GameTag::Classical;
            const auto ctl = classical::classical_heading(c, params);
            out.kind = CellResult::Kind::Classical;
            out.residual = hamiltonian_classical(c, co, ctl, params);
            return out;
        }
        if (!selected(region)) {
            return out;
        }

        // singular lines, the centre and the shore
        const double band = 2.0 * h;
        if (region == RegionLabel::FocalLine || region == RegionLabel::UniversalLine ||
            region == RegionLabel::AntipodalPoint || c.theta < band || c.theta > kPi - band ||
            c.r < params.eps_r + band || c.r > 1.0 - band ||
            (std::abs(c.r - mu) < band && c.theta > kPi - 4.0 * band)) {
            out.kind = CellResult::Kind::Skipped;
            return out;
        }

        try {
            AdviseOptions opts;
            opts.omega_now = 1.0;
            const StrategyAdvice centre = advise(c, params, opts);
            if (centre.value_kind != ValueKind::TimeToE || !std::isfinite(centre.value)) {
                out.kind = CellResult::Kind::Failed;
                return out;
            }

            // probes within 2h that change region put the cell in the skip band
            const std::array<double, 4> offsets{-2.0 * h, -h, h, 2.0 * h};
            for (const double d : offsets) {
                const PolarState pr{c.r + d, c.theta};
                const PolarState pt{c.r, c.theta + d};
                if (classify(pr, params) != region || classify(pt, params) != region) {
                    out.kind = CellResult::Kind::Skipped;
                    return out;
                }
            }

            const auto value_at = [&](const PolarState& p) -> std::optional<double> {
                try {
                    AdviseOptions o;
                    o.omega_now = 1.0;
                    if (centre.entry) o.entry_hint = &*centre.entry;
                    const auto a = advise(p, params, o);
                    if (!std::isfinite(a.value)) return std::nullopt;
                    return a.value;
                } catch (const LakeError&) {
                    return std::nullopt;
                }
            };
            std::array<std::optional<double>, 5> fr{};
            std::array<std::optional<double>, 5> ft{};
            fr[2] = centre.value;
            ft[2] = centre.value;
            const std::array<int, 4> idx{0, 1, 3, 4};
            for (std::size_t m = 0; m < 4; ++m) {
                const double d = offsets[m];
                // +-2h probes are only needed for one-sided stencils
                if (m == 0 || m == 3) continue;
                fr[static_cast<std::size_t>(idx[m])] = value_at({c.r + d, c.theta});
                ft[static_cast<std::size_t>(idx[m])] = value_at({c.r, c.theta + d});
            }
            if (!fr[1] || !fr[3]) {
                fr[0] = value_at({c.r - 2.0 * h, c.theta});
                fr[4] = value_at({c.r + 2.0 * h, c.theta});
            }
            if (!ft[1] || !ft[3]) {
                ft[0] = value_at({c.r, c.theta - 2.0 * h});
                ft[4] = value_at({c.r, c.theta + 2.0 * h});
            }
            const auto dv_dr = derivative(fr, h);
            const auto dv_dtheta = derivative(ft, h);
            if (!dv_dr || !dv_dtheta) {
                out.kind = CellResult::Kind::Failed;
                return out;
            }
            Costate co;
            co.lambda_r = *dv_dr;
            co.lambda_theta = *dv_dtheta;
            co.game_tag = region == RegionLabel::UniversalTributary ? GameTag::MinTimeUL
                                                                   : GameTag::MinTimeFL;
            out.kind = CellResult::Kind::Sample;
            out.residual = hamiltonian_min_time(c, co, centre.controls, params);
            if (region == RegionLabel::FocalTributary && centre.entry) {
                const double s = centre.entry->s;
                const double nu = -s * s / (mu * mu - s * s);
                out.nu_error = std::abs(*dv_dtheta - nu) / std::abs(nu);
            }
        } catch (const LakeError&) {
            out.kind = CellResult::Kind::Failed;
        }
        return out;
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            results[k] = evaluate(k);
        }
    };
    const unsigned n_workers =
        options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }

    HjiReport report;
    for (const auto& cell : results) {
        switch (cell.kind) {
            case CellResult::Kind::Sample:
                ++report.n_samples;
                if (std::abs(cell.residual) > report.max_abs_residual ||
                    !report.worst_region) {
                    report.max_abs_residual = std::abs(cell.residual);
                    report.worst_state = cell.state;
                    report.worst_region = cell.region;
                }
                report.max_rel_nu_error = std::max(report.max_rel_nu_error, cell.nu_error);
                break;
            case CellResult::Kind::Skipped: ++report.n_skipped; break;
            case CellResult::Kind::Failed: ++report.n_failed; break;
            case CellResult::Kind::Classical:
                ++report.classical_samples;
                report.classical_max_abs_residual =
                    std::max(report.classical_max_abs_residual, std::abs(cell.residual));
                break;
            case CellResult::Kind::None: break;
        }
    }
    return report;
}

double barrier_sweep(const GameParams& params, std::size_t n) {
    params.validate();
    if (n < 2) {
        fail(ErrorCode::Domain, "barrier_sweep needs n >= 2");
    }
    const double mu = params.mu;
    // r_i = mu + (1 - mu) i/n, i = 1..n; r = mu itself is excluded
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double r =
            i == n ? 1.0 : mu + (1.0 - mu) * static_cast<double>(i) / static_cast<double>(n);
        const double res = classical::barrier_residual(r, params);
        if (!std::isfinite(res)) {
            return std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Hamiltonian along trajectories

TrajectoryHamiltonian trajectory_hamiltonian(const sim::Trajectory& trajectory,
                                             const GameParams& params, double spacing) {
    TrajectoryHamiltonian out;
    if (trajectory.samples.empty()) {
        return out;
    }
    const double mu = params.mu;
    std::optional<focal::EntrySolution> hint;
    std::optional<focal::Phase> phase;
    std::optional<double> prev_r;
    std::optional<double> prev_lambda;
    std::optional<double> tangent;
    std::size_t n_ft = 0;
    std::optional<std::size_t> change_index;
    std::size_t nearest_index = 0;
    double next_t = trajectory.samples.front().t;

    for (const auto& smp : trajectory.samples) {
        // the tangent passage is read off the raw samples; at the coarser
        // spacing the first post-tangent sample can still show r falling
        if (phase == focal::Phase::PreTangent && prev_r && smp.state.r > *prev_r) {
            phase = focal::Phase::PostTangent;
        }
        prev_r = smp.state.r;
        if (smp.t + 1e-12 < next_t) {
            continue;
        }
        next_t = smp.t + spacing;
        const PolarState st = smp.state;
        double h = 0.0;
        switch (smp.region) {
            case RegionLabel::AboveBarrier:
            case RegionLabel::OnBarrier: {
                if (st.r < mu) continue;
                h = hamiltonian_classical(st, classical_costate(st.r, params), smp.controls,
                                          params);
                break;
            }
            case RegionLabel::FocalTributary: {
                const auto sol = hint ? focal::solve_entry_near(st, *hint, params)
                                      : focal::solve_entry(st, params);
                if (!phase) {
                    phase = focal::phase_of(sol.case_tag);
                    if (sol.case_tag == focal::EntryCase::One) {
                        tangent = sol.s * sol.s / mu;
                    }
                }
                hint = sol;
                const auto co = fl_costate(st.r, sol.s, *phase, params);
                h = hamiltonian_min_time(st, co, smp.controls, params);
                if (prev_lambda && ((*prev_lambda > 0.0) != (co.lambda_r > 0.0))) {
                    ++out.lambda_r_sign_changes;
                    out.r_at_sign_change = st.r;
                    change_index = n_ft;
                }
                if (!out.r_nearest || st.r < *out.r_nearest) {
                    out.r_nearest = st.r;
                    nearest_index = n_ft;
                }
                ++n_ft;
                prev_lambda = co.lambda_r;
                break;
            }
            case RegionLabel::FocalLine: {
                if (st.r >= mu) continue;
                const auto co =
                    fl_costate(std::max(st.r, params.eps_r), std::max(st.r, params.eps_r),
                               focal::Phase::PostTangent, params);
                h = hamiltonian_min_time(st, co, smp.controls, params);
                break;
            }
            case RegionLabel::UniversalLine:
            case RegionLabel::UniversalTributary:
                if (st.r < params.eps_r) continue;
                h = hamiltonian_min_time(st, ul_costate(params), smp.controls, params);
                break;
            default:
                continue;
        }
        ++out.n_samples;
        if (std::abs(h) > out.max_abs_h) {
            out.max_abs_h = std::abs(h);
            out.t_worst = smp.t;
        }
    }
    out.tangent_radius = tangent;
    if (tangent && out.r_nearest && change_index) {
        // r - c grows like mu^2 dt^2 / (2c) away from the tangent time
        out.nearest_tolerance = mu * mu * spacing * spacing / (2.0 * *tangent) + 1e-12;
        out.flip_at_nearest =
            (*change_index == nearest_index || *change_index == nearest_index + 1) &&
            std::abs(*out.r_nearest - *tangent) <= out.nearest_tolerance;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Combined report

bool VerifyReport::pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass; });
}

namespace {

nlohmann::json state_json(const PolarState& s) {
    return {{"r", s.r}, {"theta", s.theta}};
}

// finite doubles only; JSON has no inf
nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json j;
    j["mu"] = mu;
    j["pass"] = pass();
    auto& arr = j["suites"] = nlohmann::json::array();
    for (const auto& s : suites) {
        arr.push_back({{"name", s.name},
                       {"value", number(s.value)},
                       {"threshold", s.threshold},
                       {"pass", s.pass},
                       {"detail", s.detail}});
    }
    return j;
}

VerifyReport run_verification(const GameParams& params, const VerifyOptions& options) {
    params.validate();
    const double mu = params.mu;
    VerifyReport report;
    report.mu = mu;

    const auto add = [&](std::string name, double value, double threshold, bool pass,
                         nlohmann::json detail) {
        report.suites.push_back({std::move(name), value, threshold, pass, std::move(detail)});
    };

    {
        HjiOptions o;
        o.include_classical = true;
        const auto hji = hji_sweep(params, options.grid, options.grid, 1e-5, o);
        nlohmann::json d{{"n_samples", hji.n_samples},
                         {"n_skipped", hji.n_skipped},
                         {"n_failed", hji.n_failed},
                         {"worst_state", state_json(hji.worst_state)}};
        if (hji.worst_region) d["worst_region"] = std::string(to_string(*hji.worst_region));
        add("hji_min_time", hji.max_abs_residual, 1e-3,
            hji.n_samples > 0 && hji.max_abs_residual < 1e-3, d);
        add("value_gradient_nu", hji.max_rel_nu_error, 1e-3, hji.max_rel_nu_error < 1e-3,
            {{"n_samples", hji.n_samples}});
        add("hji_classical", hji.classical_max_abs_residual, 1e-6,
            hji.classical_max_abs_residual < 1e-6, {{"n_samples", hji.classical_samples}});

        HjiOptions ul;
        ul.only = RegionLabel::UniversalTributary;
        const auto hu = hji_sweep(params, options.grid, options.grid, 1e-5, ul);
        add("hji_ul_tributary", hu.max_abs_residual, 1e-8,
            hu.n_samples > 0 && hu.max_abs_residual < 1e-8,
            {{"n_samples", hu.n_samples}, {"worst_state", state_json(hu.worst_state)}});
    }

    {
        const double b = barrier_sweep(params, options.barrier_points);
        add("barrier_semipermeability", b, 1e-10, b < 1e-10,
            {{"points", options.barrier_points}});
    }

    // canned starts scaled to mu
    const double r_classical = 0.5 * (1.0 + mu);
    const PolarState classical_start{
        r_classical, 0.5 * (classical::barrier_theta(r_classical, params) + kPi)};
    const std::vector<PolarState> min_time_starts{
        {mu / 6.0, 2.5}, {2.0 * mu / 3.0, 2.0}, {mu / 3.0, 3.0}, {mu / 2.0, 0.2}};

    {
        sim::SimOptions so;
        so.dt = options.dt;
        const auto eq_l = sim::StrategySpec::equilibrium(sim::Side::Lady);
        const auto eq_m = sim::StrategySpec::equilibrium(sim::Side::Man);
        double worst = 0.0;
        nlohmann::json runs = nlohmann::json::array();
        std::optional<TrajectoryHamiltonian> case_one;
        std::vector<PolarState> starts = min_time_starts;
        starts.push_back(classical_start);
        for (const auto& st : starts) {
            const auto traj = sim::simulate(st, eq_l, eq_m, params, so);
            const auto th = trajectory_hamiltonian(traj, params, 0.01);
            worst = std::max(worst, th.max_abs_h);
            runs.push_back({{"start", state_json(st)},
                            {"outcome", std::string(sim::to_string(traj.outcome))},
                            {"samples", th.n_samples},
                            {"max_abs_h", th.max_abs_h}});
            if (!case_one && th.tangent_radius) case_one = th;
        }
        add("trajectory_hamiltonian", worst, 1e-6, worst < 1e-6, runs);

        if (case_one) {
            const bool ok = case_one->lambda_r_sign_changes == 1 && case_one->flip_at_nearest;
            nlohmann::json d{{"sign_changes", case_one->lambda_r_sign_changes},
                             {"tangent_radius", *case_one->tangent_radius}};
            if (case_one->r_at_sign_change) d["r_at_sign_change"] = *case_one->r_at_sign_change;
            if (case_one->r_nearest) d["r_nearest"] = *case_one->r_nearest;
            add("costate_sign_flip", static_cast<double>(case_one->lambda_r_sign_changes), 1.0,
                ok, d);
        }
    }

    {
        sim::SimOptions so;
        so.dt = options.dt;
        so.record = false;
        std::vector<sim::StrategySpec> devs{
            {sim::Side::Lady, sim::PerturbedEquilibrium{0.05}},
            {sim::Side::Lady, sim::PerturbedEquilibrium{-0.05}},
            {sim::Side::Man, sim::ConstantOmega{0.8}},
            {sim::Side::Man, sim::ConstantOmega{0.0}},
            {sim::Side::Man, sim::SwitchingOmega{0.2}},
        };
        double worst = std::numeric_limits<double>::infinity();
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& st : min_time_starts) {
            const auto rep = sim::deviation_report(st, params, devs, so);
            worst = std::min(worst, rep.worst_margin());
            for (const auto& row : rep.rows) {
                rows.push_back({{"start", state_json(st)},
                                {"deviation", row.deviation.describe()},
                                {"outcome", std::string(sim::to_string(row.outcome))},
                                {"time", number(row.time)},
                                {"equilibrium_time", rep.equilibrium_time},
                                {"margin", number(row.margin)}});
            }
        }
        add("saddle_deviations", worst, -options.deviation_tol, worst >= -options.deviation_tol,
            rows);
    }
    return report;
}

}  // namespace lakegame::verify
