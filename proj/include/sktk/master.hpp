#ifndef SKTK_MASTER_HPP
#define SKTK_MASTER_HPP

#include <vector>

#include "sktk/grid.hpp"
#include "sktk/model.hpp"

namespace sktk {

/// Per-site species densities u_i(t, x_k) in the PDE clock.
struct DiscreteState {
    Grid grid;
    Matrix u; // n x M
    double time = 0.0;

    DiscreteState() = default;
    DiscreteState(Grid g, Matrix values, double t = 0.0);

    int species() const { return static_cast<int>(u.size()); }
};

/// Entropy, its analytic time derivative and the lower-bound split of the
/// dissipation, plus the per-species gradient integrands and masses.
struct EntropyDiagnostics {
    double entropy = 0.0;
    double dissipation = 0.0;       // analytic dH/dt, always <= 0
    double sqrt_lower_bound = 0.0;  // 4h sum D_i pi_i |grad sqrt(u_i)|^2 + 2h sum a_ij |grad sqrt(u_i u_j)|^2
    std::vector<double> grad_l2;    // h sum_k |forward_diff u_i|^2 per species
    std::vector<double> mass;       // h sum_k u_i per species
};

struct StepPolicy {
    double cfl = 0.4;
    double pos_floor = 1e-300;
    int max_halvings = 40;
};

/// Snapshots of a solved trajectory at the requested sample times.
struct Trajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<Matrix> states; // per sample, n x M

    std::size_t size() const { return times.size(); }
    DiscreteState at(std::size_t s) const { return DiscreteState(grid, states[s], times[s]); }
};

/// Right-hand side D_i Lap_h(u_i) + Lap_h(u_i sum_j A_ij u_j); every row sums
/// to zero (mass conservation mechanism).
Matrix rhs(const DiscreteState& state, const ModelParams& params);

/// Largest stable explicit step for the current state:
/// cfl * h^2 / (2 max_i D_i + 2 max_i sum_j A_ij * max_{j,k} u_j).
double stable_dt(const DiscreteState& state, const ModelParams& params, double cfl);

/// One classical RK4 step. A step whose output falls at or below
/// policy.pos_floor anywhere is rejected and retried at dt/2, at most
/// policy.max_halvings times; the state actually advanced may therefore cover
/// less than dt. Throws StepFailure when halving runs out.
DiscreteState step(const DiscreteState& state, const ModelParams& params, double dt,
                   const StepPolicy& policy = {});

/// Integrates to time T recording snapshots at sample_times (sorted,
/// within [0, T]). The step is recomputed from the current state every step.
Trajectory solve(const DiscreteState& u0, const ModelParams& params, double T,
                 const StepPolicy& policy, const std::vector<double>& sample_times);

/// Discrete entropy sum_i h sum_k pi_i [u log u - u + 1]; nonnegative, zero
/// exactly at u == 1. Throws NonPositiveState on nonpositive entries.
double entropy(const DiscreteState& state, const ModelParams& params);

/// Full diagnostics at one state; requires strict positivity.
EntropyDiagnostics dissipation(const DiscreteState& state, const ModelParams& params);

} // namespace sktk

#endif // SKTK_MASTER_HPP
