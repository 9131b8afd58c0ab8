#include "lakegame/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <sstream>

#include "lakegame/classical_game.hpp"
#include "lakegame/min_time_focal.hpp"

namespace lakegame::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_number(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        std::ostringstream os;
        os << "cannot parse " << what << " from '" << text << "'";
        fail(ErrorCode::InvalidParams, os.str());
    }
    return value;
}

// Integration variables. theta is the signed separation, left unwrapped
// inside a step; phi is M's polar angle.
struct Point {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

// |theta - pi| within which a state already on the FL is held there.
constexpr double kHoldTol = 1e-6;

struct Eval {
    ControlPair physical;
    ControlPair canonical;
    PolarState canon;
    bool reflected = false;
    RegionLabel region = RegionLabel::Shore;
};

class Controller {
public:
    Controller(const StrategySpec& lady, const StrategySpec& man, const GameParams& params)
        : lady_(lady), man_(man), params_(params) {}

    // The side of theta = 0 is fixed for the duration of a step and states
    // past theta = 0 or pi are evaluated at the boundary. This keeps the
    // controls continuous inside a step; side changes happen between steps.
    Eval operator()(double t, double r, double theta) {
        Eval e;
        const double theta_c = std::clamp(side_ > 0 ? theta : -theta, 0.0, kPi);
        const Canonicalized c{{std::clamp(r, params_.eps_r, 1.0), theta_c}, side_ < 0};
        e.canon = c.state;
        e.reflected = c.reflected;
        e.region = classify(c.state, params_);
        // Inside the FL band but not yet entered: keep following the tributary
        // so that the entry is found as a crossing of theta = pi. RK4 stages
        // that overshoot pi are clamped onto it and stay on the frozen tributary.
        if (e.region == RegionLabel::FocalLine && !on_fl_ && (c.state.theta < kPi || frozen_)) {
            e.region = RegionLabel::FocalTributary;
        }
        // Once on the FL, stage states that overshoot mu stay on it until the
        // arrival event cuts the step.
        if (on_fl_ && kPi - c.state.theta <= kHoldTol && c.state.r < 1.0) {
            e.region = c.state.r >= params_.mu - params_.tol_event ? RegionLabel::AntipodalPoint
                                                                   : RegionLabel::FocalLine;
        }

        bool arbitrary = false;
        const double w_phys = man_omega(t, e.region, c.reflected, arbitrary);
        const double w_canon = c.reflected ? -w_phys : w_phys;

        ControlPair heading = lady_heading(e, w_canon);
        heading.omega = w_canon;
        heading.omega_arbitrary = arbitrary;
        e.canonical = heading;
        e.physical = reflect_controls(heading, c.reflected);
        return e;
    }

    const std::optional<focal::EntrySolution>& hint() const { return hint_; }
    void set_on_fl(bool on_fl) { on_fl_ = on_fl; }
    void set_side(double theta) { side_ = theta >= 0.0 ? 1 : -1; }
    /// Holds the entry radius fixed for the last stretch before the FL, where
    /// re-solving is ill-conditioned and the closed loop chatters about theta = pi.
    void freeze(bool on) { frozen_ = on ? hint_ : std::nullopt; }
    const std::optional<focal::EntrySolution>& frozen() const { return frozen_; }

private:
    double man_omega(double t, RegionLabel region, bool reflected, bool& arbitrary) const {
        return std::visit(
            overloaded{
                [&](const ConstantOmega& k) { return k.value; },
                [&](const SwitchingOmega& k) {
                    const auto n = static_cast<long long>(std::floor(t / k.period));
                    return n % 2 == 0 ? 1.0 : -1.0;
                },
                [&](const auto&) {
                    const double w = equilibrium_omega(region, &arbitrary);
                    return reflected ? -w : w;
                },
            },
            man_.kind);
    }

    ControlPair equilibrium_heading(const Eval& e, double w_canon) {
        if (e.region == RegionLabel::FocalTributary && frozen_) {
            return focal::fl_tributary_heading(e.canon, frozen_->s,
                                               focal::phase_of(frozen_->case_tag), params_);
        }
        if (e.region == RegionLabel::FocalTributary) {
            auto entry = hint_ ? focal::solve_entry_near(e.canon, *hint_, params_)
                               : focal::solve_entry(e.canon, params_);
            const auto c = focal::fl_tributary_heading(e.canon, entry.s,
                                                       focal::phase_of(entry.case_tag), params_);
            hint_ = std::move(entry);
            return c;
        }
        if (e.region == RegionLabel::FocalLine || e.region == RegionLabel::AntipodalPoint) {
            return focal::fl_control({std::min(e.canon.r, params_.mu), kPi}, w_canon, params_);
        }
        return advise(e.canon, params_).controls;
    }

    ControlPair lady_heading(const Eval& e, double w_canon) {
        return std::visit(
            overloaded{
                [&](const FixedHeading& k) {
                    return reflect_controls({k.cos_psi, k.sin_psi, 0.0, false}, e.reflected);
                },
                [&](const PerturbedEquilibrium& k) {
                    const ControlPair eq = equilibrium_heading(e, w_canon);
                    const bool singular = e.region == RegionLabel::FocalLine ||
                                          e.region == RegionLabel::UniversalLine ||
                                          e.region == RegionLabel::AntipodalPoint;
                    return singular ? eq : rotate_heading(eq, k.delta_psi);
                },
                [&](const auto&) { return equilibrium_heading(e, w_canon); },
            },
            lady_.kind);
    }

    StrategySpec lady_;
    StrategySpec man_;
    GameParams params_;
    std::optional<focal::EntrySolution> hint_;
    std::optional<focal::EntrySolution> frozen_;
    bool on_fl_ = false;
    int side_ = 1;
};

class Integrator {
public:
    Integrator(Controller& ctl, const GameParams& params) : ctl_(ctl), params_(params) {}

    Point rate(double t, const Point& p) {
        const auto e = ctl_(t, p.r, p.theta);
        return rate(p, e.physical);
    }

    Point rate(const Point& p, const ControlPair& c) const {
        const double r = std::max(p.r, params_.eps_r);
        return {params_.mu * c.cos_psi, params_.mu / r * c.sin_psi - c.omega, c.omega};
    }

    Point step(double t, const Point& x, double h) {
        const auto axpy = [](const Point& a, double s, const Point& k) {
            return Point{a.r + s * k.r, a.theta + s * k.theta, a.phi + s * k.phi};
        };
        const Point k1 = rate(t, x);
        const Point k2 = rate(t + 0.5 * h, axpy(x, 0.5 * h, k1));
        const Point k3 = rate(t + 0.5 * h, axpy(x, 0.5 * h, k2));
        const Point k4 = rate(t + h, axpy(x, h, k3));
        Point out{x.r + h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
                  x.theta + h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta),
                  x.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi)};
        if (!std::isfinite(out.r) || !std::isfinite(out.theta) || !std::isfinite(out.phi)) {
            std::ostringstream os;
            os << "non-finite state after step at t = " << t;
            fail(ErrorCode::Integration, os.str());
        }
        return out;
    }

private:
    Controller& ctl_;
    GameParams params_;
};

struct Located {
    double h = 0.0;
    Point x;       // just past the crossing
    Point before;  // just before it
};

// Bisects the step length for the first sign change of g.
Located locate(Integrator& in, double t, const Point& x0, double h, const Point& x1,
               const std::function<double(const Point&)>& g, double tol) {
    const double g0 = g(x0);
    double lo = 0.0;
    double hi = h;
    Point at_lo = x0;
    Point at_hi = x1;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const Point xm = in.step(t, x0, mid);
        const double gm = g(xm);
        if ((gm > 0.0) == (g0 > 0.0) && gm != 0.0) {
            lo = mid;
            at_lo = xm;
        } else {
            hi = mid;
            at_hi = xm;
        }
    }
    return {hi, at_hi, at_lo};
}

bool flips(double g0, double g1) { return (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0); }

struct Candidate {
    EventKind kind;
    Located where;
};

}  // namespace

void StrategySpec::validate() const {
    const bool ok_side = std::visit(
        overloaded{
            [&](const Equilibrium&) { return true; },
            [&](const ConstantOmega&) { return side == Side::Man; },
            [&](const SwitchingOmega&) { return side == Side::Man; },
            [&](const FixedHeading&) { return side == Side::Lady; },
            [&](const PerturbedEquilibrium&) { return side == Side::Lady; },
        },
        kind);
    if (!ok_side) {
        fail(ErrorCode::InvalidParams, "strategy '" + describe() + "' is not available to " +
                                           (side == Side::Lady ? "L" : "M"));
    }
    if (const auto* k = std::get_if<ConstantOmega>(&kind); k && !(std::abs(k->value) <= 1.0)) {
        fail(ErrorCode::InvalidParams, "constant omega must lie in [-1, 1]");
    }
    if (const auto* k = std::get_if<SwitchingOmega>(&kind); k && !(k->period > 0.0)) {
        fail(ErrorCode::InvalidParams, "switching period must be positive");
    }
    if (const auto* k = std::get_if<FixedHeading>(&kind)) {
        const double norm = std::hypot(k->cos_psi, k->sin_psi);
        if (!(std::abs(norm - 1.0) <= 1e-9)) {
            fail(ErrorCode::InvalidParams, "fixed heading must be a unit vector");
        }
    }
    if (const auto* k = std::get_if<PerturbedEquilibrium>(&kind);
        k && !std::isfinite(k->delta_psi)) {
        fail(ErrorCode::InvalidParams, "perturbation must be finite");
    }
}

StrategySpec StrategySpec::parse(Side side, std::string_view text) {
    StrategySpec spec{side, Equilibrium{}};
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? "" : text.substr(colon + 1);
    if (head == "eq" || head == "equilibrium") {
        if (!arg.empty()) fail(ErrorCode::InvalidParams, "equilibrium takes no argument");
    } else if (head == "constant") {
        spec.kind = ConstantOmega{parse_number(arg, "omega")};
    } else if (head == "switching") {
        spec.kind = SwitchingOmega{parse_number(arg, "period")};
    } else if (head == "perturbed") {
        spec.kind = PerturbedEquilibrium{parse_number(arg, "delta")};
    } else if (head == "fixed") {
        const auto comma = arg.find(',');
        if (comma == std::string_view::npos) {
            fail(ErrorCode::InvalidParams, "fixed heading needs '<cos>,<sin>'");
        }
        spec.kind = FixedHeading{parse_number(arg.substr(0, comma), "cos"),
                                 parse_number(arg.substr(comma + 1), "sin")};
    } else {
        fail(ErrorCode::InvalidParams, "unknown strategy '" + std::string(text) + "'");
    }
    spec.validate();
    return spec;
}

std::string StrategySpec::describe() const {
    std::ostringstream os;
    os.precision(12);
    std::visit(overloaded{
                   [&](const Equilibrium&) { os << "eq"; },
                   [&](const ConstantOmega& k) { os << "constant:" << k.value; },
                   [&](const SwitchingOmega& k) { os << "switching:" << k.period; },
                   [&](const FixedHeading& k) { os << "fixed:" << k.cos_psi << ',' << k.sin_psi; },
                   [&](const PerturbedEquilibrium& k) { os << "perturbed:" << k.delta_psi; },
               },
               kind);
    return os.str();
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::FocalLineEntry: return "FocalLineEntry";
        case EventKind::UniversalLineEntry: return "UniversalLineEntry";
        case EventKind::OriginPassage: return "OriginPassage";
        case EventKind::BarrierCrossing: return "BarrierCrossing";
        case EventKind::ReachedE: return "ReachedE";
        case EventKind::ReachedShore: return "ReachedShore";
        case EventKind::StrategyError: return "StrategyError";
    }
    return "Unknown";
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::ReachedE: return "ReachedE";
        case Outcome::ReachedShore: return "ReachedShore";
        case Outcome::Timeout: return "Timeout";
        case Outcome::Aborted: return "Aborted";
    }
    return "Unknown";
}

std::size_t Trajectory::count(EventKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [&](const Event& e) { return e.kind == kind; }));
}

const Event* Trajectory::first(EventKind kind) const {
    for (const auto& e : events) {
        if (e.kind == kind) return &e;
    }
    return nullptr;
}

Trajectory simulate(const PolarState& initial, const StrategySpec& lady, const StrategySpec& man,
                    const GameParams& params, const SimOptions& options) {
    params.validate();
    if (!(options.dt > 0.0) || !(options.t_max > 0.0)) {
        fail(ErrorCode::InvalidParams, "simulate needs dt > 0 and t_max > 0");
    }
    if (lady.side != Side::Lady || man.side != Side::Man) {
        fail(ErrorCode::InvalidParams, "strategy sides are swapped");
    }
    lady.validate();
    man.validate();
    canonicalize(initial.r, initial.theta);  // range check only

    Controller ctl(lady, man, params);
    Integrator integ(ctl, params);
    Trajectory traj;
    const double mu = params.mu;
    const double tol = params.tol_event;
    // |theta - pi| below which the entry radius is frozen, and the capture
    // tolerance when the frozen entry radius is reached
    constexpr double kFreezeBand = 1e-6;
    constexpr double kCaptureTol = 1e-6;

    double t = 0.0;
    Point x{initial.r, initial.theta, 0.0};
    bool on_fl = false;
    bool done = false;

    const auto canon_of = [](const Point& p) {
        return canonicalize(std::clamp(p.r, 0.0, 1.0), wrap_angle(p.theta)).state;
    };
    const auto theta_rate = [&](double tt, const Point& p) {
        const auto e = ctl(tt, p.r, p.theta);
        const double rate = integ.rate(p, e.physical).theta;
        return e.reflected ? -rate : rate;
    };
    const auto push_event = [&](double tt, EventKind kind, const Point& p, double rate = 0.0,
                                std::optional<double> s = std::nullopt, std::string detail = {}) {
        traj.events.push_back({tt, kind, canon_of(p), rate, s, std::move(detail)});
    };
    const auto record = [&](double tt, const Point& p, const Eval& e, bool force) {
        if (!options.record && !force && !traj.samples.empty()) {
            return;
        }
        Sample smp{tt, e.canon, e.canonical, to_cartesian_signed(p.r, wrap_angle(p.theta), p.phi),
                   e.region};
        smp.state.r = p.r;
        if (!traj.samples.empty() && traj.samples.back().t >= tt) {
            traj.samples.back() = smp;
        } else if (!options.record && traj.samples.size() >= 2) {
            traj.samples.back() = smp;
        } else {
            traj.samples.push_back(smp);
        }
    };
    const auto finish = [&](Outcome outcome) {
        traj.outcome = outcome;
        traj.t_final = t;
        done = true;
    };
    const auto arrive_at_E = [&] {
        push_event(t, EventKind::ReachedE, x);
        x.r = mu;
        x.theta = kPi;
        finish(Outcome::ReachedE);
    };

    try {
        if (x.r < params.eps_r) {
            push_event(t, EventKind::OriginPassage, x);
            x = {params.eps_r, kPi, x.phi};
        }
        switch (classify(canon_of(x), params)) {
            case RegionLabel::AntipodalPoint:
                arrive_at_E();
                break;
            case RegionLabel::Shore:
                push_event(t, EventKind::ReachedShore, x);
                traj.theta_f = canon_of(x).theta;
                finish(Outcome::ReachedShore);
                break;
            case RegionLabel::FocalLine:
                on_fl = true;
                x.theta = kPi;
                break;
            default:
                break;
        }

        while (!done) {
            ctl.set_on_fl(on_fl);
            ctl.set_side(x.theta);
            const Eval e0 = ctl(t, x.r, x.theta);
            record(t, x, e0, false);
            if (t >= options.t_max - 1e-12) {
                finish(Outcome::Timeout);
                break;
            }
            const RegionLabel region = e0.region;
            if (region != RegionLabel::FocalLine && region != RegionLabel::AntipodalPoint) {
                on_fl = false;
                ctl.set_on_fl(false);
            }
            const double gap_to_fl = kPi - e0.canon.theta;
            if (region == RegionLabel::FocalTributary) {
                if (!ctl.frozen() && gap_to_fl < kFreezeBand && ctl.hint()) {
                    ctl.freeze(true);
                } else if (ctl.frozen() && gap_to_fl > 10.0 * kFreezeBand) {
                    ctl.freeze(false);
                }
            } else if (ctl.frozen()) {
                ctl.freeze(false);
            }

            const double h = std::min(options.dt, options.t_max - t);
            const Point x1 = integ.step(t, x, h);

            std::vector<Candidate> hits;
            const auto consider = [&](EventKind kind, const std::function<double(const Point&)>& g,
                                      int direction, double refine_tol) {
                const double g0 = g(x);
                const double g1 = g(x1);
                if (!flips(g0, g1)) return;
                if (direction > 0 && !(g1 > g0)) return;
                if (direction < 0 && !(g1 < g0)) return;
                hits.push_back({kind, locate(integ, t, x, h, x1, g, refine_tol)});
            };

            consider(EventKind::ReachedShore, [](const Point& p) { return p.r - 1.0; }, 1, tol);
            if (on_fl) {
                consider(EventKind::ReachedE, [&](const Point& p) { return p.r - (mu - tol); }, 1,
                         tol);
            }
            consider(EventKind::OriginPassage, [&](const Point& p) { return p.r - params.eps_r; },
                     -1, tol);
            // signed separation seen from the side the step started on
            const double side = x.theta >= 0.0 ? 1.0 : -1.0;
            const auto theta_c = [side](const Point& p) { return side * p.theta; };
            if (region != RegionLabel::UniversalLine && region != RegionLabel::AntipodalPoint &&
                std::abs(x.theta) < kPi / 2.0) {
                consider(EventKind::UniversalLineEntry,
                         [&](const Point& p) { return theta_c(p) - tol; }, -1, tol);
            }
            if (!on_fl && region != RegionLabel::AntipodalPoint && std::abs(x.theta) > kPi / 2.0) {
                const auto n = hits.size();
                if (ctl.frozen()) {
                    // tangential approach: the entry is where r reaches the frozen s;
                    // a crossing of pi is kept as a fallback
                    const double s = ctl.frozen()->s;
                    consider(EventKind::FocalLineEntry, [s](const Point& p) { return p.r - s; }, 1,
                             tol);
                    if (hits.size() > n &&
                        !(std::abs(kPi - theta_c(hits.back().where.x)) <= kCaptureTol)) {
                        hits.pop_back();
                    }
                    consider(EventKind::FocalLineEntry,
                             [&](const Point& p) { return kPi - theta_c(p); }, -1, tol);
                } else {
                    consider(EventKind::FocalLineEntry,
                             [&](const Point& p) { return kPi - tol - theta_c(p); }, -1, tol);
                }
                // reaching the antipodal ray outside the FL is not an event
                while (hits.size() > n && !(hits.back().where.x.r < mu)) {
                    hits.pop_back();
                }
            }
            // barrier crossings are logged but do not cut the step
            if (x.r >= mu && x1.r >= mu && x.r <= 1.0 && x1.r <= 1.0) {
                const auto gb = [&](const Point& p) {
                    const double r = std::clamp(p.r, mu, 1.0);
                    return canon_of(p).theta - classical::barrier_theta(r, params);
                };
                if (flips(gb(x), gb(x1)) && gb(x) != 0.0) {
                    const auto loc = locate(integ, t, x, h, x1, gb, tol);
                    push_event(t + loc.h, EventKind::BarrierCrossing, loc.x, 0.0, std::nullopt,
                               gb(x) < 0.0 ? "upward" : "downward");
                }
            }

            if (hits.empty()) {
                t += h;
                x = x1;
                x.theta = wrap_angle(x.theta);
                const auto c = canon_of(x);
                auto now = classify(c, params);
                if (on_fl && kPi - c.theta <= kHoldTol && now != RegionLabel::AntipodalPoint) {
                    now = RegionLabel::FocalLine;
                }
                if (now == RegionLabel::AntipodalPoint) {
                    arrive_at_E();
                } else if (now == RegionLabel::UniversalLine && region != RegionLabel::UniversalLine &&
                           x.r >= params.eps_r) {
                    push_event(t, EventKind::UniversalLineEntry, x, 0.0);
                    x.theta = 0.0;
                } else if (now == RegionLabel::FocalLine && (on_fl || !ctl.frozen())) {
                    if (!on_fl) {
                        const double rate = theta_rate(t, x);
                        const auto& sol = ctl.frozen() ? ctl.frozen() : ctl.hint();
                        push_event(t, EventKind::FocalLineEntry, x, rate,
                                   sol ? std::optional<double>(sol->s) : std::nullopt);
                        on_fl = true;
                    }
                    x.theta = kPi;
                }
                continue;
            }

            const auto earliest = std::min_element(
                hits.begin(), hits.end(),
                [](const Candidate& a, const Candidate& b) { return a.where.h < b.where.h; });
            const Located where = earliest->where;
            switch (earliest->kind) {
                case EventKind::FocalLineEntry: {
                    // rate and entry radius of the tributary just before the crossing
                    const double rate = theta_rate(t + where.h, where.before);
                    const auto& sol = ctl.frozen() ? ctl.frozen() : ctl.hint();
                    const std::optional<double> s =
                        sol ? std::optional<double>(sol->s) : std::nullopt;
                    t += where.h;
                    x = where.x;
                    push_event(t, EventKind::FocalLineEntry, x, rate, s);
                    x.theta = kPi;
                    on_fl = true;
                    break;
                }
                case EventKind::ReachedShore:
                    t += where.h;
                    x = where.x;
                    push_event(t, EventKind::ReachedShore, x);
                    x.r = 1.0;
                    x.theta = wrap_angle(x.theta);
                    traj.theta_f = canon_of(x).theta;
                    finish(Outcome::ReachedShore);
                    break;
                case EventKind::ReachedE:
                    t += where.h;
                    x = where.x;
                    arrive_at_E();
                    break;
                case EventKind::OriginPassage:
                    t += where.h;
                    x = where.x;
                    push_event(t, EventKind::OriginPassage, x);
                    x.r = params.eps_r;
                    x.theta = kPi;
                    on_fl = true;
                    break;
                case EventKind::UniversalLineEntry:
                    t += where.h;
                    x = where.x;
                    push_event(t, EventKind::UniversalLineEntry, x,
                               theta_rate(t, where.before));
                    x.theta = 0.0;
                    break;
                default:
                    break;
            }
            x.theta = wrap_angle(x.theta);
        }
        ctl.set_on_fl(on_fl);
        ctl.set_side(x.theta);
        const Eval last = ctl(t, x.r, x.theta);
        record(t, x, last, true);
    } catch (const LakeError& err) {
        if (err.code() == ErrorCode::Integration || err.code() == ErrorCode::InvalidParams) {
            throw;
        }
        push_event(t, EventKind::StrategyError, x, 0.0, std::nullopt, err.what());
        traj.error = err.what();
        traj.outcome = Outcome::Aborted;
        traj.t_final = t;
    }
    return traj;
}

Trajectory simulate(const PolarState& initial, const StrategySpec& lady, const StrategySpec& man,
                    double dt, double t_max, const GameParams& params) {
    SimOptions opts;
    opts.dt = dt;
    opts.t_max = t_max;
    return simulate(initial, lady, man, params, opts);
}

double DeviationReport::worst_margin() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) worst = std::min(worst, row.margin);
    return worst;
}

DeviationReport deviation_report(const PolarState& initial, const GameParams& params,
                                 const std::vector<StrategySpec>& deviations,
                                 const SimOptions& options) {
    const auto lady_eq = StrategySpec::equilibrium(Side::Lady);
    const auto man_eq = StrategySpec::equilibrium(Side::Man);
    SimOptions quiet = options;
    quiet.record = false;

    // E is the lowest point of B: crossing B upward reaches L's target set
    // as well, so the earlier of the two counts as arrival
    const auto arrival = [](const Trajectory& tr) {
        double t = tr.outcome == Outcome::ReachedE ? tr.t_final
                                                   : std::numeric_limits<double>::infinity();
        for (const auto& e : tr.events) {
            if (e.kind == EventKind::BarrierCrossing && e.detail == "upward") {
                t = std::min(t, e.t);
                break;
            }
        }
        return t;
    };

    DeviationReport report;
    report.initial = initial;
    report.predicted_value = advise(initial, params, {1.0}).value;

    report.equilibrium_time = arrival(simulate(initial, lady_eq, man_eq, params, quiet));
    // a deviation still running one time unit after the equilibrium arrival
    // has settled its sign; cut it there
    SimOptions dev_opts = quiet;
    if (std::isfinite(report.equilibrium_time)) {
        dev_opts.t_max = std::min(options.t_max, report.equilibrium_time + 1.0);
    }

    std::vector<std::future<Trajectory>> runs;
    runs.reserve(deviations.size());
    for (const auto& dev : deviations) {
        dev.validate();
        const bool lady_deviates = dev.side == Side::Lady;
        runs.push_back(std::async(std::launch::async, [&, dev, lady_deviates] {
            return simulate(initial, lady_deviates ? dev : lady_eq, lady_deviates ? man_eq : dev,
                            params, dev_opts);
        }));
    }

    for (std::size_t i = 0; i < deviations.size(); ++i) {
        const Trajectory tr = runs[i].get();
        DeviationRow row;
        row.deviation = deviations[i];
        row.outcome = tr.outcome;
        row.time = arrival(tr);
        row.margin = deviations[i].side == Side::Lady ? row.time - report.equilibrium_time
                                                      : report.equilibrium_time - row.time;
        report.rows.push_back(row);
    }
    return report;
}

DeviationReport deviation_report(const PolarState& initial, const GameParams& params,
                                 const std::vector<double>& deltas, const SimOptions& options) {
    std::vector<StrategySpec> devs;
    for (double d : deltas) {
        devs.push_back({Side::Lady, PerturbedEquilibrium{d}});
        devs.push_back({Side::Lady, PerturbedEquilibrium{-d}});
    }
    return deviation_report(initial, params, devs, options);
}

}  // namespace lakegame::sim
