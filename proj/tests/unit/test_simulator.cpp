#include <doctest.h>

#include <cmath>

#include "lakegame/full_solution.hpp"
#include "lakegame/min_time_focal.hpp"
#include "lakegame/simulator.hpp"

using namespace lakegame;
using namespace lakegame::sim;

namespace {

const GameParams P = GameParams::make(0.3);
const StrategySpec EqL = StrategySpec::equilibrium(Side::Lady);
const StrategySpec EqM = StrategySpec::equilibrium(Side::Man);

Trajectory run(PolarState x, const StrategySpec& l = EqL, const StrategySpec& m = EqM,
               double dt = 1e-4, double t_max = 20.0) {
    SimOptions o;
    o.dt = dt;
    o.t_max = t_max;
    return simulate(x, l, m, P, o);
}

bool throws_code(ErrorCode code, auto&& fn) {
    try {
        fn();
    } catch (const LakeError& e) {
        return e.code() == code;
    }
    return false;
}

}  // namespace

TEST_CASE("simulate examples") {
    auto t = run({0.3, kPi});
    CHECK(t.outcome == Outcome::ReachedE);
    CHECK(t.t_final == 0.0);

    t = run({0.15, kPi});
    CHECK(t.outcome == Outcome::ReachedE);
    CHECK(std::abs(t.t_final - kPi / 3) < 1e-3);

    t = run({0.15, 0.3});
    CHECK(t.outcome == Outcome::ReachedE);
    CHECK(std::abs(t.t_final - (kPi / 2 + 0.5)) < 1e-3);
}

TEST_CASE("trajectory bookkeeping") {
    const double dt = 1e-3;
    const auto t = run({0.05, 2.5}, EqL, EqM, dt);
    REQUIRE(t.samples.size() > 2);
    for (std::size_t i = 1; i < t.samples.size(); ++i) {
        CHECK(t.samples[i].t > t.samples[i - 1].t);
        CHECK(t.samples[i].t - t.samples[i - 1].t <= dt + 1e-12);
    }
    for (const auto& e : t.events) {
        bool bracketed = false;
        for (std::size_t i = 1; i < t.samples.size(); ++i) {
            if (t.samples[i - 1].t <= e.t + 1e-12 && e.t <= t.samples[i].t + 1e-12) bracketed = true;
        }
        CHECK(bracketed);
    }
    CHECK(t.events.back().kind == EventKind::ReachedE);
    CHECK(t.samples.back().t == t.t_final);
}

TEST_CASE("timeout") {
    const auto t = run({0.05, 2.5}, EqL, EqM, 1e-3, 0.25);
    CHECK(t.outcome == Outcome::Timeout);
    CHECK(t.t_final == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("strategy specs") {
    CHECK(throws_code(ErrorCode::InvalidParams, [] { StrategySpec{Side::Lady, ConstantOmega{0.5}}.validate(); }));
    CHECK(throws_code(ErrorCode::InvalidParams, [] { StrategySpec{Side::Man, FixedHeading{1, 0}}.validate(); }));
    CHECK(throws_code(ErrorCode::InvalidParams, [] { StrategySpec{Side::Man, ConstantOmega{1.5}}.validate(); }));
    CHECK(throws_code(ErrorCode::InvalidParams, [] { StrategySpec{Side::Man, SwitchingOmega{0.0}}.validate(); }));
    CHECK(throws_code(ErrorCode::InvalidParams, [] { StrategySpec::parse(Side::Man, "bogus"); }));
    CHECK(throws_code(ErrorCode::InvalidParams, [] { StrategySpec::parse(Side::Lady, "constant:0.5"); }));
    const auto m = StrategySpec::parse(Side::Man, "switching:0.2");
    REQUIRE(std::holds_alternative<SwitchingOmega>(m.kind));
    CHECK(std::get<SwitchingOmega>(m.kind).period == 0.2);
    const auto l = StrategySpec::parse(Side::Lady, "fixed:0.6,0.8");
    REQUIRE(std::holds_alternative<FixedHeading>(l.kind));
    CHECK(std::get<FixedHeading>(l.kind).sin_psi == 0.8);
    CHECK(std::holds_alternative<Equilibrium>(StrategySpec::parse(Side::Lady, "eq").kind));
}

TEST_CASE("RK4 order on a tributary segment") {
    // terminal state at t = 0.4 from an FL-tributary start, before FL entry
    const PolarState x0{0.5, 2.2};
    const auto end = [&](double dt) {
        const auto t = run(x0, EqL, EqM, dt, 0.4);
        REQUIRE(t.outcome == Outcome::Timeout);
        return t.samples.back().state;
    };
    const auto ref = end(0.4 / 512);
    const auto err = [&](double dt) {
        const auto s = end(dt);
        return std::hypot(s.r - ref.r, s.theta - ref.theta);
    };
    const double e1 = err(0.4 / 8);
    const double e2 = err(0.4 / 16);
    MESSAGE("errors " << e1 << " " << e2 << " ratio " << e1 / e2);
    CHECK(e1 / e2 >= 8.0);
    CHECK(e1 / e2 <= 32.0);
}

TEST_CASE("FL entry event and entry-radius drift") {
    for (const auto& x : {PolarState{0.05, 2.5}, PolarState{0.2, 2.0}, PolarState{0.5, 2.2}}) {
        CAPTURE(x.r);
        const auto pred = focal::solve_entry(x, P);
        const auto t = run(x);
        const auto* e = t.first(EventKind::FocalLineEntry);
        REQUIRE(e != nullptr);
        CHECK(std::abs(e->state.theta - kPi) <= P.tol_event);
        CHECK(std::abs(e->state.r - pred.s) <= 1e-4);
        CHECK(std::abs(e->theta_rate) < 1e-6);
        double drift = 0.0;
        focal::EntrySolution hint = pred;
        for (const auto& s : t.samples) {
            if (s.t >= e->t) break;
            if (s.region != RegionLabel::FocalTributary) continue;
            hint = focal::solve_entry_near(s.state, hint, P);
            drift = std::max(drift, std::abs(hint.s - pred.s));
        }
        CHECK(drift < 1e-5);
    }
}

TEST_CASE("origin passage happens once and lands on the FL") {
    const auto t = run({0.15, 0.3});
    CHECK(t.count(EventKind::OriginPassage) == 1);
    const auto* e = t.first(EventKind::OriginPassage);
    REQUIRE(e != nullptr);
    CHECK(std::abs(e->t - 0.5) < 1e-6);
    for (const auto& s : t.samples) {
        if (s.t > e->t) {
            CHECK(std::abs(s.state.theta - kPi) <= P.tol_event);
            break;
        }
    }
}

TEST_CASE("reactive FL control against a switching M") {
    const auto t = run({0.1, kPi}, EqL, StrategySpec{Side::Man, SwitchingOmega{0.2}});
    CHECK(t.outcome == Outcome::ReachedE);
    double worst = 0.0;
    for (const auto& s : t.samples) worst = std::max(worst, std::abs(s.state.theta - kPi));
    CHECK(worst < 1e-6);
    CHECK(std::abs(t.t_final - focal::time_on_fl(0.1, P)) < 1e-3);
}

TEST_CASE("deviation_report examples") {
    const PolarState x{0.05, 2.5};
    const auto rep = deviation_report(x, P, std::vector<double>{0.05});
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        CHECK(row.margin >= -1e-3);
        CHECK(row.time >= rep.equilibrium_time - 1e-3);
    }
    CHECK(std::abs(rep.equilibrium_time - rep.predicted_value) < 1e-3);

    const auto m = deviation_report(x, P, std::vector<StrategySpec>{StrategySpec{Side::Man, ConstantOmega{0.8}}});
    REQUIRE(m.rows.size() == 1);
    CHECK(m.rows[0].outcome == Outcome::ReachedE);
    CHECK(m.rows[0].time <= m.equilibrium_time + 1e-3);
    CHECK(m.worst_margin() >= -1e-3);
}

TEST_CASE("classical start reaches the shore") {
    const auto t = run({0.6, 2.8});
    CHECK(t.outcome == Outcome::ReachedShore);
    REQUIRE(t.theta_f);
    CHECK(std::abs(t.samples.back().state.r - 1.0) < 1e-6);
}

TEST_CASE("an upward barrier crossing counts as arrival for M deviations") {
    // M standing still lets L out above B long before the equilibrium time
    const PolarState x{0.3821, 2.9717};
    const auto t = run(x, EqL, StrategySpec{Side::Man, ConstantOmega{0.0}});
    const auto* e = t.first(EventKind::BarrierCrossing);
    REQUIRE(e != nullptr);
    CHECK(e->detail == "upward");
    CHECK(t.outcome == Outcome::ReachedShore);

    const auto rep = deviation_report(x, P, {StrategySpec{Side::Man, ConstantOmega{0.0}}});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].time == doctest::Approx(e->t).epsilon(1e-9));
    CHECK(rep.rows[0].margin > 1.0);
}
