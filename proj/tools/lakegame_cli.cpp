// lakegame: solve, flowfield, simulate, verify, critical-mu.

#include <iostream>

#include <CLI11.hpp>

#include "lakegame/io/commands.hpp"

namespace io = lakegame::io;

int main(int argc, char** argv) {
    CLI::App app{"Lady in the Lake solver"};
    app.require_subcommand(1);

    io::RunConfig cfg;
    std::string format;
    std::string theta_text;

    const auto add_mu = [&](CLI::App* sub) {
        sub->add_option("--mu", cfg.mu, "speed ratio in (0, 1)")->capture_default_str();
    };

    auto* solve = app.add_subcommand("solve", "equilibrium controls and value at a state");
    add_mu(solve);
    solve->add_option("--r", cfg.r, "radius")->required();
    solve->add_option("--theta", theta_text, "separation angle, radians")->required();

    auto* flow = app.add_subcommand("flowfield", "equilibrium flowfield figures");
    add_mu(flow);
    flow->add_option("--game", cfg.game, "classical | time | tributary | all")
        ->capture_default_str();
    flow->add_option("--s-grid", cfg.s_grid, "FL tributary seeds")->capture_default_str();
    flow->add_option("--ul-grid", cfg.ul_grid, "UL tributary seeds")->capture_default_str();
    flow->add_option("--fan-grid", cfg.fan_grid, "classical fan seeds")->capture_default_str();
    flow->add_option("--out", cfg.out, "output file (single game)");
    flow->add_option("--out-dir", cfg.out_dir, "directory for --game all")->capture_default_str();
    flow->add_option("--format", format, "csv | svg (default from --out extension)");

    auto* simulate = app.add_subcommand("simulate", "closed-loop trajectory as CSV");
    add_mu(simulate);
    simulate->add_option("--r0", cfg.r, "initial radius")->required();
    simulate->add_option("--theta0", theta_text, "initial separation, radians")->required();
    simulate->add_option("--lady", cfg.lady, "eq | fixed:<cos>,<sin> | perturbed:<rad>")
        ->capture_default_str();
    simulate->add_option("--man", cfg.man, "eq | constant:<w> | switching:<period>")
        ->capture_default_str();
    simulate->add_option("--dt", cfg.dt, "RK4 step")->capture_default_str();
    simulate->add_option("--t-max", cfg.t_max, "time horizon")->capture_default_str();
    simulate->add_option("--out", cfg.out, "CSV file (stdout when omitted)");

    auto* verify = app.add_subcommand("verify", "HJI, barrier and saddle checks as JSON");
    add_mu(verify);
    verify->add_option("--grid", cfg.grid, "HJI grid points per axis")->capture_default_str();
    verify->add_option("--dt", cfg.dt, "simulation step")->capture_default_str();
    verify->add_option("--out", cfg.out, "JSON file (stdout when omitted)");

    auto* crit = app.add_subcommand("critical-mu", "speed ratio where theta_T vanishes");
    add_mu(crit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : io::kExitInput;
    }

    if (*solve) cfg.command = io::Command::Solve;
    if (*flow) cfg.command = io::Command::Flowfield;
    if (*simulate) cfg.command = io::Command::Simulate;
    if (*verify) cfg.command = io::Command::Verify;
    if (*crit) cfg.command = io::Command::CriticalMu;

    if (!theta_text.empty()) {
        try {
            cfg.theta = io::parse_angle(theta_text);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return io::kExitInput;
        }
    }
    if (!format.empty()) {
        cfg.format = io::parse_format(format);
        if (!cfg.format) {
            std::cerr << "error: unknown format '" << format << "'\n";
            return io::kExitInput;
        }
    }
    return io::run(cfg, std::cout, std::cerr);
}
