#include "lakegame/io/commands.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "lakegame/classical_game.hpp"
#include "lakegame/full_solution.hpp"
#include "lakegame/io/csv.hpp"
#include "lakegame/io/flowfield.hpp"
#include "lakegame/io/svg.hpp"
#include "lakegame/simulator.hpp"
#include "lakegame/verification.hpp"

namespace lakegame::io {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    }
    f << text;
    f.flush();
    if (!f) {
        fail(ErrorCode::Io, "write to " + path.string() + " failed");
    }
}

GameParams params_of(const RunConfig& c) { return GameParams::make(c.mu); }

OutputFormat format_for(const RunConfig& c, OutputFormat fallback) {
    if (c.format) return *c.format;
    if (c.out) {
        const auto ext = std::filesystem::path(*c.out).extension().string();
        if (ext == ".csv") return OutputFormat::Csv;
        if (ext == ".svg") return OutputFormat::Svg;
        if (ext == ".json") return OutputFormat::Json;
    }
    return fallback;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

double parse_angle(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        fail(ErrorCode::Domain, "angle '" + std::string(text) + "' is not a number in radians");
    }
    if (text.find_first_of("eE") != std::string_view::npos) return v;
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) return v;
    const auto decimals = static_cast<int>(text.size() - dot - 1);
    if (decimals < 6) return v;
    const double half_ulp = 0.5 * std::pow(10.0, -decimals);
    for (const double target : {0.0, kPi, -kPi}) {
        if (std::abs(v - target) <= half_ulp) return target;
    }
    return v;
}

std::optional<OutputFormat> parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    if (text == "svg") return OutputFormat::Svg;
    return std::nullopt;
}

void RunConfig::validate() const {
    GameParams::make(mu);
    const auto finite = [](double v) { return std::isfinite(v); };
    switch (command) {
        case Command::Solve:
        case Command::Simulate:
            if (!finite(r) || !finite(theta) || r < 0.0 || r > 1.0 || std::abs(theta) > kPi) {
                fail(ErrorCode::Domain,
                     "state must satisfy 0 <= r <= 1 and |theta| <= pi (radians)");
            }
            break;
        default: break;
    }
    if (command == Command::Simulate && (!(dt > 0.0) || !(t_max > 0.0) || !finite(t_max))) {
        fail(ErrorCode::Domain, "simulate needs dt > 0 and a finite t_max > 0");
    }
    if (command == Command::Verify && grid < 4) {
        fail(ErrorCode::Domain, "verify needs --grid >= 4");
    }
    if (command == Command::Flowfield) {
        if (game != "all" && game != "classical" && game != "time" && game != "tributary") {
            fail(ErrorCode::Domain, "unknown game '" + game + "'");
        }
        if (game == "all" && out) {
            fail(ErrorCode::Domain, "--out needs a single --game; use --out-dir with all");
        }
        if (out && out->empty()) {
            fail(ErrorCode::Domain, "empty output path");
        }
        if (s_grid < 1 || ul_grid < 1) {
            fail(ErrorCode::Domain, "seed grids need at least one seed");
        }
    }
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
    const GameParams params = params_of(c);
    const PolarState state = canonicalize(c.r, c.theta).state;
    AdviseOptions opts;
    opts.omega_now = 1.0;
    const StrategyAdvice adv = advise(state, params, opts);
    nlohmann::json j{
        {"mu", c.mu},
        {"r", state.r},
        {"theta", state.theta},
        {"region", std::string(to_string(adv.region))},
        {"cos_psi", adv.controls.cos_psi},
        {"sin_psi", adv.controls.sin_psi},
        {"omega", adv.controls.omega},
        {"omega_arbitrary", adv.controls.omega_arbitrary},
        {"value", adv.value},
        {"value_kind", std::string(to_string(adv.value_kind))},
    };
    if (adv.entry) {
        j["entry"] = {{"s", adv.entry->s},
                      {"case", std::string(to_string(adv.entry->case_tag))},
                      {"t_L", adv.entry->t_L},
                      {"t_M", adv.entry->t_M}};
    }
    out << dump(j);
    return kExitOk;
}

int cmd_flowfield(const RunConfig& c, std::ostream& out) {
    const GameParams params = params_of(c);
    FlowfieldOptions fo;
    fo.s_grid = c.s_grid;
    fo.ul_grid = c.ul_grid;
    fo.fan_grid = c.fan_grid;

    const auto render = [&](std::string_view game, OutputFormat fmt) -> std::string {
        std::ostringstream os;
        if (game == "tributary") {
            const auto fig = tributary_figure(params);
            if (fmt == OutputFormat::Csv) {
                os << "path,kind,case,x,y\n";
                for (const auto& p : fig.paths) {
                    for (const auto& q : p.points) {
                        os << p.id << ',' << p.kind << ',' << p.label << ','
                           << format_number(q.x) << ',' << format_number(q.y) << '\n';
                    }
                }
                return os.str();
            }
            return tributary_svg(fig);
        }
        const Flowfield field =
            game == "classical" ? classical_flowfield(params, fo) : time_flowfield(params, fo);
        if (fmt == OutputFormat::Csv) {
            write_flowfield_csv(os, field);
            return os.str();
        }
        return flowfield_svg(field);
    };

    if (c.game == "all") {
        const std::filesystem::path dir(c.out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
        const std::pair<const char*, const char*> figures[] = {
            {"classical", "classical.svg"}, {"time", "full.svg"}, {"tributary", "fl-tributary.svg"}};
        for (const auto& [game, name] : figures) {
            write_file(dir / name, render(game, OutputFormat::Svg));
            out << (dir / name).string() << '\n';
        }
        return kExitOk;
    }
    const OutputFormat fmt = format_for(c, OutputFormat::Svg);
    if (fmt == OutputFormat::Json) {
        fail(ErrorCode::Domain, "flowfield writes csv or svg");
    }
    const std::string text = render(c.game, fmt);
    if (c.out) {
        write_file(*c.out, text);
    } else {
        out << text;
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const GameParams params = params_of(c);
    const auto lady = sim::StrategySpec::parse(sim::Side::Lady, c.lady);
    const auto man = sim::StrategySpec::parse(sim::Side::Man, c.man);
    sim::SimOptions so;
    so.dt = c.dt;
    so.t_max = c.t_max;
    const auto traj = sim::simulate({c.r, c.theta}, lady, man, params, so);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    if (c.out) {
        write_file(*c.out, os.str());
    } else {
        out << os.str();
    }
    err << "outcome " << sim::to_string(traj.outcome) << " at t = " << format_number(traj.t_final);
    if (traj.theta_f) err << ", theta_f = " << format_number(*traj.theta_f);
    if (!traj.error.empty()) err << " (" << traj.error << ")";
    err << '\n';
    return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    const GameParams params = params_of(c);
    verify::VerifyOptions vo;
    vo.grid = c.grid;
    vo.dt = c.dt;
    const auto report = verify::run_verification(params, vo);
    const std::string text = dump(report.to_json());
    if (c.out) {
        write_file(*c.out, text);
    } else {
        out << text;
    }
    return report.pass() ? kExitOk : kExitVerifyFailed;
}

int cmd_critical_mu(const RunConfig& c, std::ostream& out) {
    const GameParams params = params_of(c);
    nlohmann::json j{{"mu_crit", classical::critical_mu(params)},
                     {"mu", c.mu},
                     {"theta_T", classical::theta_T(params)}};
    out << dump(j);
    return kExitOk;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        switch (config.command) {
            case Command::Solve: return cmd_solve(config, out);
            case Command::Flowfield: return cmd_flowfield(config, out);
            case Command::Simulate: return cmd_simulate(config, out, err);
            case Command::Verify: return cmd_verify(config, out);
            case Command::CriticalMu: return cmd_critical_mu(config, out);
        }
    } catch (const LakeError& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return e.code() == ErrorCode::Io ? kExitIo : kExitInput;
    }
    return kExitInput;
}

}  // namespace lakegame::io
