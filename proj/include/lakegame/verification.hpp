#pragma once

// Closed-form costates, Hamiltonian residuals and the numerical checks built
// on them: HJI sweeps with finite-difference value gradients, barrier
// semipermeability sweeps, Hamiltonian along simulated trajectories, and a
// combined report.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lakegame/core_model.hpp"
#include "lakegame/full_solution.hpp"
#include "lakegame/min_time_focal.hpp"
#include "lakegame/simulator.hpp"

namespace lakegame::verify {

enum class GameTag { Classical, MinTimeFL, MinTimeUL };

struct Costate {
    double lambda_r = 0.0;
    double lambda_theta = 0.0;
    double nu = 0.0;
    GameTag game_tag = GameTag::Classical;
};

/// lambda_r = sqrt(1/mu^2 - 1/r^2), lambda_theta = 1, nu = sqrt(1/mu^2 - 1).
Costate classical_costate(double r, const GameParams& params);

/// FL tributary entering at s. nu = lambda_theta = -s^2/(mu^2 - s^2) and
/// |lambda_r| = sqrt(mu^2 - s^4/r^2)/(mu^2 - s^2), positive before the
/// tangent point and negative after it. On the FL itself use s = r.
Costate fl_costate(double r, double s, focal::Phase phase, const GameParams& params);

/// lambda_r = 1/mu, lambda_theta = nu = 0.
Costate ul_costate(const GameParams& params);

/// lambda_r mu cos psi + lambda_theta ((mu/r) sin psi - omega).
double hamiltonian_classical(const PolarState& state, const Costate& costate,
                             const ControlPair& controls, const GameParams& params);

/// Same plus the unit running cost.
double hamiltonian_min_time(const PolarState& state, const Costate& costate,
                            const ControlPair& controls, const GameParams& params);

struct HjiOptions {
    /// Restrict to one region (e.g. UniversalTributary); all below-barrier
    /// cells otherwise.
    std::optional<RegionLabel> only;
    /// Also check AboveBarrier cells against the classical Hamiltonian.
    bool include_classical = false;
    unsigned threads = 0;
};

struct HjiReport {
    double max_abs_residual = 0.0;
    PolarState worst_state;
    std::optional<RegionLabel> worst_region;
    std::size_t n_samples = 0;
    /// Cells of the selected regions dropped because a stencil point lies
    /// within 2h of a boundary or singular surface.
    std::size_t n_skipped = 0;
    /// Cells whose value or stencil could not be evaluated.
    std::size_t n_failed = 0;
    /// Worst relative mismatch between the numerical dV/dtheta and nu on
    /// FL-tributary cells.
    double max_rel_nu_error = 0.0;

    double classical_max_abs_residual = 0.0;
    std::size_t classical_samples = 0;
};

/// HJI residual on the value_grid lattice with central finite-difference
/// gradients of step h. Cells whose +-h or +-2h probes leave the cell's
/// region (the partition, the barrier, the singular lines) are skipped; a
/// second-order one-sided stencil stands in when a central probe cannot be
/// evaluated.
HjiReport hji_sweep(const GameParams& params, std::size_t n_r, std::size_t n_theta,
                    double h = 1e-5, const HjiOptions& options = {});

/// max |barrier_residual| over r_i = mu + (1 - mu) i/n, i = 1..n.
double barrier_sweep(const GameParams& params, std::size_t n);

struct TrajectoryHamiltonian {
    double max_abs_h = 0.0;
    double t_worst = 0.0;
    std::size_t n_samples = 0;
    /// Sign changes of lambda_r along the focal-tributary part.
    std::size_t lambda_r_sign_changes = 0;
    /// Radius of the sample where the change happened and the tangent radius
    /// s^2/mu of the first FL-tributary sample (Case One only).
    std::optional<double> r_at_sign_change;
    std::optional<double> tangent_radius;
    /// Smallest sampled radius on the tributary, and the largest offset from
    /// the tangent radius a sample can have at this spacing.
    std::optional<double> r_nearest;
    double nearest_tolerance = 0.0;
    /// The sign change happens at the nearest sample or the one after it.
    bool flip_at_nearest = false;
};

/// Evaluates the closed-form costate Hamiltonian along an equilibrium
/// trajectory every `spacing` time units. The FL-tributary phase starts from
/// the entry case and flips when r starts to grow.
TrajectoryHamiltonian trajectory_hamiltonian(const sim::Trajectory& trajectory,
                                             const GameParams& params, double spacing = 0.01);

struct SuiteResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    nlohmann::json detail;
};

struct VerifyOptions {
    std::size_t grid = 50;
    std::size_t barrier_points = 1000;
    double dt = 1e-4;
    double deviation_tol = 1e-3;
};

struct VerifyReport {
    double mu = 0.0;
    std::vector<SuiteResult> suites;
    bool pass() const;
    nlohmann::json to_json() const;
};

/// Runs the HJI, barrier, trajectory-Hamiltonian and saddle-deviation suites
/// on a canned set of states scaled to mu.
VerifyReport run_verification(const GameParams& params, const VerifyOptions& options = {});

}  // namespace lakegame::verify
