#include <doctest.h>

#include <cmath>
#include <random>

#include "lakegame/classical_game.hpp"
#include "lakegame/min_time_focal.hpp"
#include "lakegame/simulator.hpp"
#include "oracles/oracles.hpp"

using namespace lakegame;
using namespace lakegame::focal;

namespace {

const GameParams P = GameParams::make(0.3);

// Golden entry radii, frozen from oracle::solve_entry (Cartesian geometry,
// 2e5-point scan) before the library solve was written.
struct Golden {
    double r, theta, s;
    int case_tag;
};
constexpr Golden kGolden[] = {
    {0.05, 2.5, 0.12159414598911553, 2},
    {0.2, 2.0, 0.15416901017684198, 1},
    {0.5, 2.2, 0.0753049956853935, 1},
    {0.1, 3.0, 0.15479650163203584, 2},
    {0.25, 1.5, 0.08677268497781082, 1},
};

// integral of dr / sqrt(mu^2 - r^2) from s to mu with r = mu - u^2
double time_on_fl_oracle(double s, double mu) {
    const auto g = [&](double u) { return 2.0 / std::sqrt(2.0 * mu - u * u); };
    const double b = std::sqrt(mu - s);
    const int n = 2000;
    const double h = b / n;
    double acc = g(0.0) + g(b);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(i * h);
    return acc * h / 3.0;
}

bool throws_code(ErrorCode code, auto&& fn) {
    try {
        fn();
    } catch (const LakeError& e) {
        return e.code() == code;
    }
    return false;
}

bool segments_cross(oracle::Vec a, oracle::Vec b, oracle::Vec c, oracle::Vec d) {
    const double d1 = oracle::cross(b - a, c - a);
    const double d2 = oracle::cross(b - a, d - a);
    const double d3 = oracle::cross(d - c, a - c);
    const double d4 = oracle::cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
           d4 != 0;
}

}  // namespace

TEST_CASE("fl_control examples") {
    auto c = fl_control(PolarState{0.15, kPi}, 1.0, P);
    CHECK(c.sin_psi == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.cos_psi == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
    CHECK(std::abs(state_derivative(PolarState{0.15, kPi}, c, P).dtheta_dt) < 1e-15);
    c = fl_control(PolarState{0.3, kPi}, 1.0, P);
    CHECK(c.sin_psi == 1.0);
    CHECK(c.cos_psi == 0.0);
    c = fl_control(PolarState{0.15, kPi}, -1.0, P);
    CHECK(c.sin_psi == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(std::abs(state_derivative(PolarState{0.15, kPi}, c, P).dtheta_dt) < 1e-15);
    CHECK(throws_code(ErrorCode::OffFocalLine, [] { fl_control(PolarState{0.15, 3.0}, 1.0, P); }));
}

TEST_CASE("time_on_fl examples") {
    CHECK(time_on_fl(0.3, P) == 0.0);
    CHECK(time_on_fl(0.0, P) == doctest::Approx(kPi / 2));
    CHECK(time_on_fl(0.15, P) == doctest::Approx(kPi / 3).epsilon(1e-15));
    for (double s : {0.0, 0.05, 0.15, 0.29}) {
        CHECK(std::abs(time_on_fl(s, P) - time_on_fl_oracle(s, 0.3)) < 1e-9);
    }
}

TEST_CASE("fl_tributary_heading examples") {
    auto c = fl_tributary_heading(PolarState{0.15, kPi}, 0.15, Phase::PostTangent, P);
    CHECK(c.sin_psi == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.cos_psi == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
    const auto on_fl = fl_control(PolarState{0.15, kPi}, 1.0, P);
    CHECK(c.sin_psi == doctest::Approx(on_fl.sin_psi));
    c = fl_tributary_heading(PolarState{0.075, 2.0}, 0.15, Phase::PreTangent, P);
    CHECK(c.sin_psi == doctest::Approx(1.0));
    CHECK(std::abs(c.cos_psi) < 1e-7);
    c = fl_tributary_heading(PolarState{0.5, 2.0}, 0.15, Phase::PreTangent, P);
    CHECK(c.sin_psi == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(c.cos_psi == doctest::Approx(-std::sqrt(1 - 0.0225)).epsilon(1e-14));

    // Cartesian oracle: the heading points along the tangent to the circle of radius s^2/mu
    const double r = 0.5, theta = 2.0, s = 0.15, cc = s * s / 0.3;
    const oracle::Vec p0{r * std::cos(theta), r * std::sin(theta)};
    const double a = theta + std::acos(cc / r);
    const oracle::Vec t{cc * std::cos(a), cc * std::sin(a)};
    const oracle::Vec d = (1.0 / oracle::norm(t - p0)) * (t - p0);
    const oracle::Vec radial{std::cos(theta), std::sin(theta)};
    const oracle::Vec tangential{-std::sin(theta), std::cos(theta)};
    CHECK(oracle::dot(d, radial) == doctest::Approx(c.cos_psi).epsilon(1e-12));
    CHECK(oracle::dot(d, tangential) == doctest::Approx(c.sin_psi).epsilon(1e-12));
}

TEST_CASE("fl_flowfield examples") {
    for (double s : {0.05, 0.15, 0.25}) {
        const auto f0 = fl_flowfield(s, 0.0, P);
        CHECK(f0.r == doctest::Approx(s).epsilon(1e-15));
        CHECK(f0.theta == doctest::Approx(kPi).epsilon(1e-15));
        const double tb = (s / 0.3) * std::sqrt(1 - s * s / 0.09);
        CHECK(tau_bar(s, P) == doctest::Approx(tb).epsilon(1e-15));
        CHECK(fl_flowfield(s, tb, P).r == doctest::Approx(s * s / 0.3).epsilon(1e-9));
        for (int i = 0; i <= 400; ++i) {
            const double tau = 2.0 * i / 400;
            CHECK(fl_flowfield(s, tau, P).r >= s * s / 0.3 - 1e-12);
        }
    }
    // s -> 0: the tributary parallels the partition
    const double s = 1e-6;
    const auto a = fl_flowfield(s, 1.0, P);
    const auto b = fl_flowfield(s, 2.0, P);
    CHECK(std::abs((b.theta - a.theta) / (b.r - a.r) - 1.0 / 0.3) < 1e-3);
}

TEST_CASE("fl_flowfield matches retrograde RK4") {
    for (double s : {0.05, 0.15, 0.25}) {
        const double h = 1e-4;
        const auto ode = oracle::integrate_retrograde(s, 0.3, 2.0, h);
        double worst = 0.0;
        for (std::size_t i = 0; i < ode.size(); i += 50) {
            const auto f = fl_flowfield(s, h * static_cast<double>(i), P);
            worst = std::max({worst, std::abs(f.r - ode[i].r), std::abs(f.theta - ode[i].theta)});
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("arrival_times against Cartesian geometry") {
    const PolarState x{0.05, 2.0};
    const auto lib = arrival_times(x, 0.12, EntryCase::One, P);
    const auto geo = oracle::case_one_geometry(0.05, 2.0, 0.12, 0.3);
    CHECK(std::abs(lib.t_L - geo.t_L) < 1e-12);
    CHECK(std::abs(lib.t_M - geo.t_M) < 1e-12);
    const auto lib2 = arrival_times(PolarState{0.05, 2.5}, 0.12, EntryCase::Two, P);
    const auto geo2 = oracle::case_two_geometry(0.05, 2.5, 0.12, 0.3);
    CHECK(std::abs(lib2.t_L - geo2.t_L) < 1e-12);
    CHECK(std::abs(lib2.t_M - geo2.t_M) < 1e-12);
    // degenerate Case Two start on the FL
    const auto deg = arrival_times(PolarState{0.1, kPi}, 0.1, EntryCase::Two, P);
    CHECK(std::abs(deg.t_L) < 1e-12);
    CHECK(std::abs(deg.t_M) < 1e-12);
}

TEST_CASE("golden entry radii") {
    for (const auto& g : kGolden) {
        CAPTURE(g.r);
        CAPTURE(g.theta);
        const auto o = oracle::solve_entry(g.r, g.theta, 0.3);
        REQUIRE(o);
        CHECK(std::abs(o->s - g.s) < 1e-10);
        CHECK(o->case_tag == g.case_tag);
        const auto sol = solve_entry(PolarState{g.r, g.theta}, P);
        CHECK(std::abs(sol.s - g.s) < 1e-10);
        CHECK((sol.case_tag == EntryCase::One ? 1 : 2) == g.case_tag);
        CHECK(std::abs(sol.t_L - sol.t_M) < 1e-9);
        CHECK(std::abs(sol.total_time - o->total_time) < 1e-8);
        CHECK(sol.s > 0.0);
        CHECK(sol.s <= 0.3);
        if (sol.case_tag == EntryCase::One) CHECK(g.r >= sol.s * sol.s / 0.3);
        else CHECK(sol.s >= g.r);
    }
    const auto sol = solve_entry(PolarState{0.05, 2.5}, P);
    CHECK(sol.total_time == doctest::Approx(1.4958944900510662).epsilon(1e-9));
}

TEST_CASE("solve_entry on the focal line is the degenerate Case Two") {
    const auto sol = solve_entry(PolarState{0.1, kPi}, P);
    CHECK(sol.s == 0.1);
    CHECK(sol.case_tag == EntryCase::Two);
    CHECK(std::abs(sol.t_L) < 1e-12);
}

TEST_CASE("solve_entry round trip from the flowfield") {
    const auto g = fl_flowfield(0.2, 0.3, P);
    CHECK(std::abs(solve_entry(PolarState{g.r, g.theta}, P).s - 0.2) < 1e-6);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> us(0.01, 0.29), ut(0.0, 2.0);
    int done = 0;
    while (done < 60) {
        const double s = us(rng);
        const auto f = fl_flowfield(s, ut(rng), P);
        if (f.r > 0.98 || f.theta >= kPi - 1e-6 || f.theta <= f.r / 0.3 + 1e-6) continue;
        if (f.r >= 0.3 && f.theta >= classical::barrier_theta(f.r, P) - 1e-6) continue;
        CAPTURE(s);
        CHECK(std::abs(solve_entry(PolarState{f.r, f.theta}, P).s - s) < 1e-6);
        ++done;
    }
}

TEST_CASE("solve_entry_near follows a moving state") {
    const PolarState x{0.05, 2.5};
    const auto base = solve_entry(x, P);
    const auto near = solve_entry_near(PolarState{0.0501, 2.5001}, base, P);
    const auto full = solve_entry(PolarState{0.0501, 2.5001}, P);
    CHECK(std::abs(near.s - full.s) < 1e-10);
    CHECK(near.case_tag == full.case_tag);
}

TEST_CASE("solve_entry region errors") {
    CHECK(throws_code(ErrorCode::Region, [] { solve_entry(PolarState{0.15, 0.3}, P); }));
    CHECK(throws_code(ErrorCode::Region, [] { solve_entry(PolarState{0.6, 2.8}, P); }));
    SolveOptions o;
    o.record_all_roots = true;
    const auto sol = solve_entry(PolarState{0.2, 2.0}, P, o);
    REQUIRE_FALSE(sol.all_roots.empty());
    CHECK(sol.all_roots.front() == doctest::Approx(sol.s));
}

TEST_CASE("tributaries do not cross and stay above the partition") {
    // small s swings through theta ~ pi within tau ~ s/mu, so sample densely
    // up to 4 tau_bar; coarse chords there cut corners and cross falsely
    const int n_s = 100, n_tau = 120;
    std::vector<std::vector<oracle::Vec>> curves;
    for (int i = 1; i <= n_s; ++i) {
        const double s = 0.3 * i / (n_s + 1);
        const double tb = tau_bar(s, P);
        std::vector<double> taus;
        for (int k = 0; k <= n_tau; ++k) taus.push_back(4.0 * tb * k / n_tau);
        for (int k = 1; k <= n_tau; ++k) taus.push_back(4.0 * tb + (4.0 - 4.0 * tb) * k / n_tau);
        std::vector<oracle::Vec> c;
        for (double tau : taus) {
            const auto f = fl_flowfield(s, tau, P);
            CHECK(f.theta >= f.r / 0.3 - 1e-9);
            c.push_back({f.r, f.theta});
            if (f.r >= 1.0) break;
        }
        curves.push_back(std::move(c));
    }
    int crossings = 0;
    for (std::size_t a = 0; a < curves.size(); ++a) {
        for (std::size_t b = a + 1; b < curves.size(); ++b) {
            for (std::size_t i = 1; i < curves[a].size(); ++i) {
                for (std::size_t j = 1; j < curves[b].size(); ++j) {
                    crossings += segments_cross(curves[a][i - 1], curves[a][i], curves[b][j - 1],
                                                curves[b][j]);
                }
            }
        }
    }
    CHECK(crossings == 0);
}

TEST_CASE("simulated tributaries enter tangentially along straight lines") {
    for (double s : {0.08, 0.15, 0.22}) {
        const auto f = fl_flowfield(s, 0.6, P);
        const auto traj = sim::simulate(PolarState{f.r, f.theta}, sim::StrategySpec::equilibrium(sim::Side::Lady),
                                        sim::StrategySpec::equilibrium(sim::Side::Man), P);
        const auto* e = traj.first(sim::EventKind::FocalLineEntry);
        REQUIRE(e != nullptr);
        CHECK(std::abs(e->theta_rate) < 1e-6);
        CHECK(std::abs(e->state.r - s) < 1e-4);
        std::vector<oracle::Vec> pts;
        for (const auto& smp : traj.samples) {
            if (smp.t > e->t) break;
            pts.push_back({smp.pose.x_L, smp.pose.y_L});
        }
        CHECK(oracle::colinearity(pts) < 1e-4);
    }
}
