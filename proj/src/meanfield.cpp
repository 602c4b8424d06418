#include "sktk/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sktk/errors.hpp"
#include "sktk/fit.hpp"
#include "sktk/parallel.hpp"
#include "sktk/particles.hpp"
#include "sktk/rng.hpp"

namespace sktk {

namespace {

void check_dims(const Grid& grid, const Matrix& u, const MicroParams& micro) {
    if (static_cast<int>(u.size()) != micro.n) {
        throw std::invalid_argument("mean-field state species count does not match model");
    }
    for (const auto& row : u) {
        if (static_cast<int>(row.size()) != grid.M) {
            throw std::invalid_argument("mean-field row length does not match grid");
        }
    }
}

inline double second_diff(const std::vector<double>& v, int k, int M) {
    const int kp = (k + 1 == M) ? 0 : k + 1;
    const int km = (k == 0) ? M - 1 : k - 1;
    return v[static_cast<std::size_t>(kp)] + v[static_cast<std::size_t>(km)] -
           2.0 * v[static_cast<std::size_t>(k)];
}

Matrix mf_rhs_unchecked(const Grid& grid, const Matrix& u, const MicroParams& micro) {
    const int n = micro.n;
    const int M = grid.M;
    Matrix out(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(M), 0.0));
    std::vector<double> prod(static_cast<std::size_t>(M));
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (int k = 0; k < M; ++k) {
            out[ui][static_cast<std::size_t>(k)] =
                micro.D[ui] * second_diff(u[ui], k, M);
        }
        for (int j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            const double coeff = micro.Dij[ui][uj] * micro.pi[uj];
            if (coeff == 0.0) {
                continue;
            }
            for (int k = 0; k < M; ++k) {
                prod[static_cast<std::size_t>(k)] =
                    u[uj][static_cast<std::size_t>(k)] * u[ui][static_cast<std::size_t>(k)];
            }
            for (int k = 0; k < M; ++k) {
                out[ui][static_cast<std::size_t>(k)] += coeff * second_diff(prod, k, M);
            }
        }
    }
    return out;
}

double stable_mf_dt(const MicroParams& micro) {
    double max_d = 0.0;
    double max_row = 0.0;
    for (int i = 0; i < micro.n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        max_d = std::max(max_d, micro.D[ui]);
        double row = 0.0;
        for (int j = 0; j < micro.n; ++j) {
            row += micro.Dij[ui][static_cast<std::size_t>(j)] * micro.pi[static_cast<std::size_t>(j)];
        }
        max_row = std::max(max_row, row);
    }
    const double denom = 2.0 * max_d + 2.0 * max_row;
    return denom > 0.0 ? 0.4 / denom : 1.0;
}

} // namespace

MeanFieldState::MeanFieldState(Grid g, Matrix rows, double t)
    : grid(g), u(std::move(rows)), time(t) {
    for (const auto& row : u) {
        if (static_cast<int>(row.size()) != grid.M) {
            throw std::invalid_argument("MeanFieldState: row length must equal the site count");
        }
        double sum = 0.0;
        for (double v : row) {
            if (v < -1e-12) {
                throw std::invalid_argument("MeanFieldState: rows must be nonnegative");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-10) {
            throw std::invalid_argument("MeanFieldState: each row must sum to one");
        }
    }
}

Matrix mf_rhs(const MeanFieldState& state, const MicroParams& micro) {
    check_dims(state.grid, state.u, micro);
    return mf_rhs_unchecked(state.grid, state.u, micro);
}

MeanFieldTrajectory mf_solve(const MeanFieldState& u0, const MicroParams& micro, double t_end,
                             const std::vector<double>& sample_times) {
    check_dims(u0.grid, u0.u, micro);
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("mf_solve: t_end must be positive");
    }
    for (const auto& row : u0.u) {
        for (double v : row) {
            if (!(v > 0.0)) {
                throw NonPositiveState("mf_solve: initial rows must be strictly positive");
            }
        }
    }

    const std::size_t n = u0.u.size();
    const std::size_t M = static_cast<std::size_t>(u0.grid.M);
    const double dt_max = stable_mf_dt(micro);
    const double t_tol = 1e-12 * std::max(1.0, t_end);

    MeanFieldTrajectory traj;
    traj.grid = u0.grid;
    Matrix u = u0.u;
    double t = 0.0;
    std::size_t next_sample = 0;

    auto emit_due = [&]() {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t + t_tol) {
            traj.times.push_back(sample_times[next_sample]);
            traj.states.push_back(u);
            ++next_sample;
        }
    };

    auto axpy = [&](const Matrix& base, const Matrix& k, double c) {
        Matrix out(base);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 0; m < M; ++m) {
                out[i][m] += c * k[i][m];
            }
        }
        return out;
    };

    emit_due();
    while (t < t_end - t_tol) {
        double dt = std::min(dt_max, t_end - t);
        if (next_sample < sample_times.size()) {
            dt = std::min(dt, std::max(sample_times[next_sample] - t, t_tol));
        }
        const Matrix k1 = mf_rhs_unchecked(u0.grid, u, micro);
        const Matrix k2 = mf_rhs_unchecked(u0.grid, axpy(u, k1, 0.5 * dt), micro);
        const Matrix k3 = mf_rhs_unchecked(u0.grid, axpy(u, k2, 0.5 * dt), micro);
        const Matrix k4 = mf_rhs_unchecked(u0.grid, axpy(u, k3, dt), micro);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 0; m < M; ++m) {
                u[i][m] += dt / 6.0 * (k1[i][m] + 2.0 * k2[i][m] + 2.0 * k3[i][m] + k4[i][m]);
                if (!std::isfinite(u[i][m])) {
                    throw StepFailure("mf_solve: state became non-finite");
                }
            }
        }
        t += dt;
        emit_due();
    }
    emit_due();
    return traj;
}

double weighted_site_entropy(const MeanFieldState& state, const std::vector<double>& pi) {
    if (pi.size() != state.u.size()) {
        throw std::invalid_argument("weighted_site_entropy: pi length mismatch");
    }
    const double log_m = std::log(static_cast<double>(state.grid.M));
    double out = 0.0;
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        double s = 0.0;
        for (double v : state.u[i]) {
            if (!(v > 0.0)) {
                throw NonPositiveState("weighted_site_entropy: rows must be strictly positive");
            }
            s += v * (std::log(v) + log_m);
        }
        out += pi[i] * s;
    }
    return out;
}

double product_entropy_formula(const std::vector<std::vector<double>>& site_laws,
                               const std::vector<double>& pi_hat, long long N, int M) {
    if (site_laws.size() != pi_hat.size()) {
        throw std::invalid_argument("product_entropy_formula: species count mismatch");
    }
    const double log_m = std::log(static_cast<double>(M));
    double out = 0.0;
    for (std::size_t i = 0; i < site_laws.size(); ++i) {
        const double particles = static_cast<double>(species_particles(pi_hat[i], N));
        double s = 0.0;
        for (double v : site_laws[i]) {
            if (!(v > 0.0)) {
                throw NonPositiveMeasure("product_entropy_formula: site laws must be positive");
            }
            s += v * (std::log(v) + log_m);
        }
        out += particles * s;
    }
    return out / static_cast<double>(N);
}

ChaosReport chaos_study(const MicroParams& micro, Grid grid, const Matrix& u0,
                        const std::vector<long long>& N_list, int trials, double t_end,
                        std::uint64_t seed, const std::vector<double>& sample_times) {
    if (N_list.empty() || trials < 1) {
        throw std::invalid_argument("chaos_study: need N values and at least one trial");
    }
    for (std::size_t i = 1; i < N_list.size(); ++i) {
        if (N_list[i] <= N_list[i - 1]) {
            throw std::invalid_argument("chaos_study: N_list must be strictly increasing");
        }
    }

    // Normalised weights keep the particle counts and the mean-field
    // coefficient pi_j consistent: floor(pi_hat N)/N -> pi_hat.
    const std::vector<double> pi_hat = normalized_weights(micro.pi);
    const MicroParams micro_hat(micro.D, micro.Dij, pi_hat);
    const int n = micro_hat.n;
    check_dims(grid, u0, micro_hat);

    for (long long N : N_list) {
        for (int i = 0; i < n; ++i) {
            if (species_particles(pi_hat[static_cast<std::size_t>(i)], N) < 1) {
                throw std::invalid_argument("chaos_study: some species gets zero particles");
            }
        }
    }

    const MeanFieldTrajectory reference =
        mf_solve(MeanFieldState(grid, u0), micro_hat, t_end, sample_times);
    const std::size_t S = reference.size();
    const std::size_t M = static_cast<std::size_t>(grid.M);

    ChaosReport report;
    report.N_values = N_list;

    for (std::size_t ni = 0; ni < N_list.size(); ++ni) {
        const long long N = N_list[ni];
        // Per-trial marginals, filled independently and reduced in trial order.
        std::vector<std::vector<Matrix>> per_trial(static_cast<std::size_t>(trials));
        parallel_for_index(static_cast<std::size_t>(trials), [&](std::size_t trial) {
            CounterRng rng(substream_seed(seed, (ni << 32) ^ trial));
            const ParticleConfig config = sample_config(grid, u0, pi_hat, N, rng);
            const ParticleTrajectory traj =
                ssa_run(config, micro_hat, t_end, substream_seed(seed, (ni << 32) ^ trial ^ 0xabcdefull),
                        sample_times);
            std::vector<Matrix> marginals(S);
            for (std::size_t s = 0; s < S; ++s) {
                marginals[s].assign(static_cast<std::size_t>(n), std::vector<double>(M, 0.0));
            }
            for (int i = 0; i < n; ++i) {
                const auto freq = empirical_marginal(traj, i);
                for (std::size_t s = 0; s < S; ++s) {
                    marginals[s][static_cast<std::size_t>(i)] = freq[s];
                }
            }
            per_trial[trial] = std::move(marginals);
        });

        std::vector<double> per_species(static_cast<std::size_t>(n), 0.0);
        for (std::size_t s = 0; s < S; ++s) {
            for (int i = 0; i < n; ++i) {
                double l1 = 0.0;
                for (std::size_t k = 0; k < M; ++k) {
                    double mean = 0.0;
                    for (int trial = 0; trial < trials; ++trial) {
                        mean += per_trial[static_cast<std::size_t>(trial)][s]
                                         [static_cast<std::size_t>(i)][k];
                    }
                    mean /= static_cast<double>(trials);
                    l1 += std::abs(mean - reference.states[s][static_cast<std::size_t>(i)][k]);
                }
                per_species[static_cast<std::size_t>(i)] =
                    std::max(per_species[static_cast<std::size_t>(i)], l1);
            }
        }
        report.marginal_distance.push_back(per_species);
        report.distance_max.push_back(
            *std::max_element(per_species.begin(), per_species.end()));

        // Exact covariance defect where the labeled space is enumerable.
        std::vector<long long> per_species_counts(static_cast<std::size_t>(n));
        long long total_particles = 0;
        for (int i = 0; i < n; ++i) {
            per_species_counts[static_cast<std::size_t>(i)] =
                species_particles(pi_hat[static_cast<std::size_t>(i)], N);
            total_particles += per_species_counts[static_cast<std::size_t>(i)];
        }
        double states_needed = std::pow(static_cast<double>(grid.M),
                                        static_cast<double>(total_particles));
        if (states_needed <= static_cast<double>(LabeledStateSpace::kDefaultEnumCap)) {
            const LabeledStateSpace space(grid, per_species_counts, N);
            const Generator gen = build_generator(space, micro_hat);
            std::vector<double> mu = product_distribution(space, u0);
            double defect = 0.0;
            double t_prev = 0.0;
            for (double ts : sample_times) {
                if (ts > t_prev) {
                    mu = evolve_mu(space, gen, std::move(mu), ts - t_prev);
                    t_prev = ts;
                }
                for (int i = 0; i < n; ++i) {
                    for (int j = i; j < n; ++j) {
                        std::vector<long long> pij(static_cast<std::size_t>(n), 0);
                        pij[static_cast<std::size_t>(i)] += 1;
                        pij[static_cast<std::size_t>(j)] += 1;
                        if (pij[static_cast<std::size_t>(i)] >
                                per_species_counts[static_cast<std::size_t>(i)] ||
                            pij[static_cast<std::size_t>(j)] >
                                per_species_counts[static_cast<std::size_t>(j)]) {
                            continue;
                        }
                        std::vector<long long> pi_only(static_cast<std::size_t>(n), 0);
                        pi_only[static_cast<std::size_t>(i)] = 1;
                        std::vector<long long> pj_only(static_cast<std::size_t>(n), 0);
                        pj_only[static_cast<std::size_t>(j)] = 1;
                        const Marginal two = project_marginal(space, mu, pij);
                        const Marginal one_i = project_marginal(space, mu, pi_only);
                        const Marginal one_j = project_marginal(space, mu, pj_only);
                        for (int a = 0; a < grid.M; ++a) {
                            for (int b = 0; b < grid.M; ++b) {
                                // Two-slot marginal is little-endian: first
                                // retained slot is the low digit.
                                const std::size_t idx =
                                    static_cast<std::size_t>(a + grid.M * b);
                                const double gap =
                                    std::abs(two.dist[idx] -
                                             one_i.dist[static_cast<std::size_t>(a)] *
                                                 one_j.dist[static_cast<std::size_t>(b)]);
                                defect = std::max(defect, gap);
                            }
                        }
                    }
                }
            }
            report.oracle_N_values.push_back(N);
            report.covariance_defect.push_back(defect);
        }
    }

    if (report.distance_max.size() >= 2) {
        std::vector<double> xs(N_list.begin(), N_list.end());
        report.distance_slope = fit_loglog_slope(xs, report.distance_max);
    }
    if (report.covariance_defect.size() >= 2) {
        std::vector<double> xs(report.oracle_N_values.begin(), report.oracle_N_values.end());
        report.covariance_slope = fit_loglog_slope(xs, report.covariance_defect);
    }
    return report;
}

} // namespace sktk
