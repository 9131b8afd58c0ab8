#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "lakegame/classical_game.hpp"
#include "lakegame/full_solution.hpp"
#include "lakegame/min_time_universal.hpp"
#include "lakegame/simulator.hpp"
#include "lakegame/verification.hpp"

using namespace lakegame;

namespace {

const GameParams P = GameParams::make(0.3);

AdviseOptions with_omega(double w) {
    AdviseOptions o;
    o.omega_now = w;
    return o;
}

// Largest |V_j - V_j+1| over theta-neighbours that straddle the partition.
double partition_jump(const ValueGrid& g) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_r; ++i) {
        for (std::size_t j = 0; j + 1 < g.n_theta; ++j) {
            const auto& a = g.at(i, j);
            const auto& b = g.at(i, j + 1);
            if (a.region == RegionLabel::UniversalTributary && b.region == RegionLabel::FocalTributary) {
                REQUIRE(a.value);
                REQUIRE(b.value);
                worst = std::max(worst, std::abs(*a.value - *b.value));
            }
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("classify examples") {
    CHECK(classify(PolarState{0.3, kPi}, P) == RegionLabel::AntipodalPoint);
    CHECK(classify(PolarState{0.15, 0.3}, P) == RegionLabel::UniversalTributary);
    CHECK(classify(PolarState{0.05, 2.5}, P) == RegionLabel::FocalTributary);
    CHECK(classify(PolarState{1.0, 2.0}, P) == RegionLabel::Shore);
    CHECK(classify(PolarState{0.15, kPi}, P) == RegionLabel::FocalLine);
    CHECK(classify(PolarState{0.5, 0.0}, P) == RegionLabel::UniversalLine);
    CHECK(classify(PolarState{0.6, 2.8}, P) == RegionLabel::AboveBarrier);
    CHECK(classify(PolarState{0.6, classical::barrier_theta(0.6, P)}, P) == RegionLabel::OnBarrier);
    // partition boundary belongs to the UL side
    CHECK(classify(PolarState{0.3, 1.0}, P) == RegionLabel::UniversalTributary);
}

TEST_CASE("classify is total on random states") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ur(0.0, 1.0), ut(0.0, kPi);
    std::size_t counts[8] = {};
    for (int i = 0; i < 1000000; ++i) {
        const auto label = classify(PolarState{ur(rng), ut(rng)}, P);
        ++counts[static_cast<int>(label)];
    }
    CHECK(counts[static_cast<int>(RegionLabel::AboveBarrier)] > 0);
    CHECK(counts[static_cast<int>(RegionLabel::FocalTributary)] > 0);
    CHECK(counts[static_cast<int>(RegionLabel::UniversalTributary)] > 0);
    std::size_t total = 0;
    for (auto c : counts) total += c;
    CHECK(total == 1000000);
}

TEST_CASE("advise examples") {
    auto a = advise(PolarState{0.15, kPi}, P, with_omega(1.0));
    CHECK(a.region == RegionLabel::FocalLine);
    CHECK(a.controls.sin_psi == doctest::Approx(0.5));
    CHECK(a.value == doctest::Approx(kPi / 3).epsilon(1e-15));
    CHECK(a.value_kind == ValueKind::TimeToE);

    a = advise(PolarState{0.15, 0.3}, P);
    CHECK(a.controls.cos_psi == -1.0);
    CHECK(a.controls.sin_psi == 0.0);
    CHECK(a.controls.omega_arbitrary);
    CHECK(a.value == doctest::Approx(kPi / 2 + 0.5).epsilon(1e-15));

    a = advise(PolarState{0.6, 2.8}, P);
    CHECK(2.8 > classical::barrier_theta(0.6, P));
    CHECK(a.region == RegionLabel::AboveBarrier);
    CHECK(a.value_kind == ValueKind::TerminalAngle);
    const auto ch = classical::classical_heading(PolarState{0.6, 2.8}, P);
    CHECK(a.controls.sin_psi == ch.sin_psi);
    CHECK(a.controls.cos_psi == ch.cos_psi);

    try {
        advise(PolarState{0.15, kPi}, P);
        FAIL("expected missing omega");
    } catch (const LakeError& e) {
        CHECK(e.code() == ErrorCode::MissingOmega);
    }
}

TEST_CASE("FL value equals time on FL") {
    for (double r : {0.01, 0.1, 0.2, 0.29}) {
        CHECK(advise(PolarState{r, kPi}, P, with_omega(1.0)).value == focal::time_on_fl(r, P));
    }
}

TEST_CASE("advice invariants on random states") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ur(0.001, 0.999), ut(0.0, kPi);
    for (int i = 0; i < 3000; ++i) {
        const PolarState x{ur(rng), ut(rng)};
        const auto a = advise(x, P, with_omega(1.0));
        const bool classical_region = a.region == RegionLabel::AboveBarrier || a.region == RegionLabel::OnBarrier;
        CHECK((a.value_kind == ValueKind::TerminalAngle) == classical_region);
        CHECK(std::isfinite(a.value));
        CHECK_NOTHROW(a.controls.validate());
        if (a.region == RegionLabel::FocalTributary) {
            REQUIRE(a.entry);
            const auto c = focal::fl_tributary_heading(x, a.entry->s, focal::phase_of(a.entry->case_tag), P);
            CHECK(c.cos_psi == a.controls.cos_psi);
            CHECK(c.sin_psi == a.controls.sin_psi);
        }
    }
}

TEST_CASE("value gradient matches the closed-form FL costates") {
    const double h = 1e-5;
    const auto V = [&](double r, double t) { return advise(PolarState{r, t}, P).value; };
    for (const auto& x : {PolarState{0.05, 2.5}, PolarState{0.2, 2.0}, PolarState{0.5, 2.2}, PolarState{0.1, 3.0}}) {
        CAPTURE(x.r);
        CAPTURE(x.theta);
        const auto a = advise(x, P);
        REQUIRE(a.entry);
        const auto co = verify::fl_costate(x.r, a.entry->s, focal::phase_of(a.entry->case_tag), P);
        const double dVdr = (V(x.r + h, x.theta) - V(x.r - h, x.theta)) / (2 * h);
        const double dVdt = (V(x.r, x.theta + h) - V(x.r, x.theta - h)) / (2 * h);
        CHECK(std::abs(dVdt - co.nu) / std::abs(co.nu) < 1e-3);
        CHECK(std::abs(dVdr - co.lambda_r) / std::abs(co.lambda_r) < 1e-3);
    }
}

TEST_CASE("re-simulated FT advice enters at s and matches the value") {
    for (const auto& x : {PolarState{0.05, 2.5}, PolarState{0.2, 2.0}, PolarState{0.5, 2.2}, PolarState{0.1, 3.0}}) {
        CAPTURE(x.r);
        const auto a = advise(x, P);
        REQUIRE(a.entry);
        const auto traj = sim::simulate(x, sim::StrategySpec::equilibrium(sim::Side::Lady),
                                        sim::StrategySpec::equilibrium(sim::Side::Man), P);
        REQUIRE(traj.outcome == sim::Outcome::ReachedE);
        const auto* e = traj.first(sim::EventKind::FocalLineEntry);
        REQUIRE(e != nullptr);
        CHECK(std::abs(e->state.r - a.entry->s) < 1e-4);
        CHECK(std::abs(traj.t_final - a.value) < 1e-3);
    }
}

TEST_CASE("value_grid 2x2 smoke") {
    const auto g = value_grid(P, 2, 2, 1);
    REQUIRE(g.cells.size() == 4);
    for (const auto& c : g.cells) {
        CAPTURE(c.r);
        CAPTURE(c.theta);
        CHECK(c.region.has_value());
        CHECK(c.error.empty());
        REQUIRE(c.value);
        CHECK(std::isfinite(*c.value));
    }
    CHECK(g.at(0, 0).region == RegionLabel::UniversalLine);
    CHECK(g.at(0, 1).region == RegionLabel::FocalLine);
    CHECK(g.at(1, 0).region == RegionLabel::Shore);
    CHECK(g.at(1, 1).region == RegionLabel::Shore);
}

TEST_CASE("value_grid is independent of the worker count") {
    const auto a = value_grid(P, 30, 30, 1);
    const auto b = value_grid(P, 30, 30, 3);
    for (std::size_t k = 0; k < a.cells.size(); ++k) {
        CHECK(a.cells[k].region == b.cells[k].region);
        CHECK(a.cells[k].value == b.cells[k].value);
    }
}

TEST_CASE("value is continuous across the partition") {
    for (double mu : {0.3, 0.25}) {
        CAPTURE(mu);
        const auto g = value_grid(GameParams::make(mu), 200, 200);
        CHECK(partition_jump(g) < 1e-2);
        for (const auto& c : g.cells) CHECK(c.error.empty());
    }
}
