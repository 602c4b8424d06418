#ifndef SKTK_MEANFIELD_HPP
#define SKTK_MEANFIELD_HPP

#include <cstdint>
#include <vector>

#include "sktk/grid.hpp"
#include "sktk/model.hpp"

namespace sktk {

/// One-particle site laws u_i (each row a distribution over the M sites),
/// evolving in the particle clock (no 1/h^2 rescaling).
struct MeanFieldState {
    Grid grid;
    Matrix u; // n x M, rows sum to 1
    double time = 0.0;

    MeanFieldState() = default;
    MeanFieldState(Grid g, Matrix rows, double t = 0.0);
};

struct MeanFieldTrajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<Matrix> states;
    std::size_t size() const { return times.size(); }
};

/// Unrescaled mean-field right-hand side:
/// D_i [u_i(k+1) + u_i(k-1) - 2 u_i(k)]
///   + sum_j D_ij pi_j [(u_j u_i)(k+1) + (u_j u_i)(k-1) - 2 (u_j u_i)(k)].
/// Row sums vanish (probability conservation).
Matrix mf_rhs(const MeanFieldState& state, const MicroParams& micro);

/// RK4 in the particle clock at dt <= 0.4 / (2 max D_i + 2 max_i sum_j D_ij pi_j).
MeanFieldTrajectory mf_solve(const MeanFieldState& u0, const MicroParams& micro, double t_end,
                             const std::vector<double>& sample_times);

/// Weighted site entropy sum_i pi_i sum_k u_i(k) log(u_i(k) M); the fixed-M
/// limit of (1/N) times the micro entropy over product laws.
double weighted_site_entropy(const MeanFieldState& state, const std::vector<double>& pi);

/// Right-hand side of the product-law identity: (1/N) sum_i floor(pi_i N)
/// sum_k u_i(k) log(u_i(k) M), with the same floor convention as the spaces.
double product_entropy_formula(const std::vector<std::vector<double>>& site_laws,
                               const std::vector<double>& pi_hat, long long N, int M);

struct ChaosReport {
    std::vector<long long> N_values;
    /// Per N, per species: sup over sample times of the L1 site distance
    /// between the trial-averaged empirical marginal and the mean-field law.
    std::vector<std::vector<double>> marginal_distance;
    std::vector<double> distance_max; // per N, max over species
    double distance_slope = 0.0;      // log-log fit of distance_max vs N

    /// Two-particle covariance defect, computed only for N values whose
    /// labeled space fits the enumeration cap.
    std::vector<long long> oracle_N_values;
    std::vector<double> covariance_defect;
    double covariance_slope = 0.0; // log-log fit (expected near -1)
};

/// Runs `trials` SSA replicas per N (Kac-factorised initial sampling from the
/// rows of u0), averages empirical marginals, and compares with mf_solve.
/// The micro weights are normalised internally so particle counts and the
/// mean-field coefficient pi_j agree. For enumerable sizes the exact
/// covariance defect sup_sites |mu^(e_i+e_j) - mu^(e_i) x mu^(e_j)| is added.
ChaosReport chaos_study(const MicroParams& micro, Grid grid, const Matrix& u0,
                        const std::vector<long long>& N_list, int trials, double t_end,
                        std::uint64_t seed, const std::vector<double>& sample_times);

} // namespace sktk

#endif // SKTK_MEANFIELD_HPP
