#ifndef SKTK_PARTICLES_HPP
#define SKTK_PARTICLES_HPP

#include <cstdint>
#include <vector>

#include "sktk/grid.hpp"
#include "sktk/model.hpp"
#include "sktk/rng.hpp"

namespace sktk {

/// floor(pi_hat * N) with a tiny nudge so that exact fractions stored in
/// doubles (1/3, 1/2, ...) land on the intended integer.
long long species_particles(double pi_hat, long long N);

/// Occupation numbers c_i(k): how many species-i particles sit at site k.
/// Row sums are pinned to floor(pi_hat_i * N) for the lifetime of the config.
struct ParticleConfig {
    Grid grid;
    std::vector<std::vector<long long>> counts; // n x M
    long long N = 0;
    std::vector<double> pi_hat; // normalised weights

    ParticleConfig() = default;
    ParticleConfig(Grid g, std::vector<std::vector<long long>> c, long long N_in,
                   std::vector<double> pi_normalised);

    int species() const { return static_cast<int>(counts.size()); }
    long long particles(int i) const;
};

/// Samples the particle positions of every species i.i.d. from the given
/// site laws (rows of u0, each summing to 1) — the Kac initial factorisation.
ParticleConfig sample_config(Grid grid, const std::vector<std::vector<double>>& site_laws,
                             const std::vector<double>& pi_hat, long long N, CounterRng& rng);

/// One aggregated Poisson clock. species_b < 0 marks a single-particle jump;
/// otherwise a co-located pair (species_a, species_b) jumping together.
struct EventClass {
    int species_a = 0;
    int species_b = -1;
    int site = 0;
    int direction = +1;
    double rate = 0.0;
};

struct RateTable {
    std::vector<EventClass> events;
    double total = 0.0;
};

/// Aggregated event rates: singles at D_i c_i(k) per direction, cross pairs at
/// (D_ij/N) c_i c_j, same-species pairs at (D_ii/N) c_i (c_i - 1)/2, matching
/// the unordered-pair count of the labeled model.
RateTable event_rates(const ParticleConfig& config, const MicroParams& micro);

struct ParticleTrajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<std::vector<std::vector<long long>>> counts; // per sample, n x M
    std::size_t size() const { return times.size(); }
};

/// Exact event-driven (Gillespie) simulation in the particle clock.
/// Deterministic given the seed. A zero total rate freezes the configuration
/// and the remaining snapshots repeat it.
ParticleTrajectory ssa_run(const ParticleConfig& config0, const MicroParams& micro, double t_end,
                           std::uint64_t seed, const std::vector<double>& sample_times);

/// Per-site frequencies c_i(k)/particles(i) at every sample time.
std::vector<std::vector<double>> empirical_marginal(const ParticleTrajectory& traj, int species);

/// Exhaustive labeled state space over Omega_M^N for desk-scale oracles.
/// States are mixed-radix numbers: slot t (roster order, species blocks in
/// order) contributes digit (state / M^t) mod M.
struct LabeledStateSpace {
    static constexpr long long kDefaultEnumCap = 2'000'000;

    Grid grid;
    std::vector<long long> particles_per_species;
    std::vector<int> roster; // species of each slot
    long long N = 0;
    long long num_states = 0;

    LabeledStateSpace(Grid g, std::vector<long long> per_species, long long N_in,
                      long long enum_cap = kDefaultEnumCap);

    int slots() const { return static_cast<int>(roster.size()); }
    int position(long long state, int slot) const {
        return static_cast<int>((state / pow_m_[static_cast<std::size_t>(slot)]) % grid.M);
    }
    /// State with the slot's particle moved by dir (+1 or -1) mod M.
    long long shifted(long long state, int slot, int dir) const;
    /// First roster slot of a species.
    int species_offset(int species) const { return offsets_[static_cast<std::size_t>(species)]; }

private:
    std::vector<long long> pow_m_;
    std::vector<int> offsets_;
};

/// Sparse generator in CSR layout; row s lists the (state, rate) transitions
/// out of s plus the diagonal. Rows sum to zero.
struct Generator {
    long long dim = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    double max_exit_rate() const; // max |diagonal|
};

/// Builds the generator of the reversible jump model: singles at rate D_i,
/// co-located unordered pairs at rate D_ij / N, both members moving by the
/// same signed step.
Generator build_generator(const LabeledStateSpace& space, const MicroParams& micro);

/// Forward (Kolmogorov) action on a measure: (Q^T mu)(x), the right-hand side
/// of the master ODE for the law of the chain.
std::vector<double> apply_to_distribution(const Generator& gen, const std::vector<double>& mu);

/// Integrates d mu/dt = Q^T mu with RK4 at dt <= 0.1 / max exit rate.
std::vector<double> evolve_mu(const LabeledStateSpace& space, const Generator& gen,
                              std::vector<double> mu0, double t);

/// Relative entropy versus the uniform law: sum mu log(mu * |Omega|).
/// Throws NonPositiveMeasure unless mu is strictly positive.
double micro_entropy(const LabeledStateSpace& space, const std::vector<double>& mu);

struct Marginal {
    std::vector<long long> p; // retained particles per species
    Grid grid;
    long long num_states = 0;
    std::vector<double> dist;
};

/// Sums mu over all coordinates beyond the first p_i of each species.
Marginal project_marginal(const LabeledStateSpace& space, const std::vector<double>& mu,
                          const std::vector<long long>& p);

/// Verifies the marginal evolution identity: the projected generator action
/// must equal the I + II + III decomposition evaluated from the (p) and
/// (p + e_j) marginals. Returns the max-norm difference (an identity, so the
/// residual is machine-level for any exchangeable mu). Throws
/// SymmetryViolation when mu is not within-species exchangeable.
double bbgky_check(const LabeledStateSpace& space, const MicroParams& micro,
                   const std::vector<double>& mu, const std::vector<long long>& p);

/// Product measure from per-species site laws (each a distribution over M sites).
std::vector<double> product_distribution(const LabeledStateSpace& space,
                                         const std::vector<std::vector<double>>& site_laws);

/// Random strictly positive distribution that is exchangeable within species
/// by construction (it depends on the state only through occupation numbers).
std::vector<double> random_symmetric_distribution(const LabeledStateSpace& space,
                                                  std::uint64_t seed);

} // namespace sktk

#endif // SKTK_PARTICLES_HPP
