#include "sktk/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sktk/errors.hpp"

namespace sktk {

long long species_particles(double pi_hat, long long N) {
    // The nudge keeps exact fractions stored in doubles (1/3 * 6, ...) on the
    // intended integer.
    return static_cast<long long>(std::floor(pi_hat * static_cast<double>(N) + 1e-9));
}

ParticleConfig::ParticleConfig(Grid g, std::vector<std::vector<long long>> c, long long N_in,
                               std::vector<double> pi_normalised)
    : grid(g), counts(std::move(c)), N(N_in), pi_hat(std::move(pi_normalised)) {
    if (counts.empty() || counts.size() != pi_hat.size()) {
        throw std::invalid_argument("ParticleConfig: counts and pi must cover the same species");
    }
    if (N < 1) {
        throw std::invalid_argument("ParticleConfig: N must be positive");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (static_cast<int>(counts[i].size()) != grid.M) {
            throw std::invalid_argument("ParticleConfig: row length must equal the site count");
        }
        long long sum = 0;
        for (long long v : counts[i]) {
            if (v < 0) {
                throw std::invalid_argument("ParticleConfig: counts must be nonnegative");
            }
            sum += v;
        }
        if (sum != species_particles(pi_hat[i], N)) {
            std::ostringstream os;
            os << "ParticleConfig: species " << i + 1 << " holds " << sum
               << " particles, expected floor(pi_i N) = " << species_particles(pi_hat[i], N);
            throw std::invalid_argument(os.str());
        }
    }
}

long long ParticleConfig::particles(int i) const {
    const auto& row = counts[static_cast<std::size_t>(i)];
    return std::accumulate(row.begin(), row.end(), 0LL);
}

ParticleConfig sample_config(Grid grid, const std::vector<std::vector<double>>& site_laws,
                             const std::vector<double>& pi_hat, long long N, CounterRng& rng) {
    const int n = static_cast<int>(site_laws.size());
    std::vector<std::vector<long long>> counts(
        static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(grid.M), 0));
    for (int i = 0; i < n; ++i) {
        const auto& law = site_laws[static_cast<std::size_t>(i)];
        if (static_cast<int>(law.size()) != grid.M) {
            throw std::invalid_argument("sample_config: site law length must equal the site count");
        }
        const long long particles = species_particles(pi_hat[static_cast<std::size_t>(i)], N);
        for (long long a = 0; a < particles; ++a) {
            const double r = rng.next_double();
            double cum = 0.0;
            int site = grid.M - 1;
            for (int k = 0; k < grid.M; ++k) {
                cum += law[static_cast<std::size_t>(k)];
                if (r < cum) {
                    site = k;
                    break;
                }
            }
            ++counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(site)];
        }
    }
    return ParticleConfig(grid, std::move(counts), N, pi_hat);
}

namespace {

RateTable rates_from_counts(const Grid& grid, const std::vector<std::vector<long long>>& counts,
                            long long N, const MicroParams& micro) {
    RateTable table;
    const int n = static_cast<int>(counts.size());
    const int M = grid.M;
    for (int i = 0; i < n; ++i) {
        const double d = micro.D[static_cast<std::size_t>(i)];
        if (d == 0.0) {
            continue;
        }
        for (int k = 0; k < M; ++k) {
            const long long c = counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (c == 0) {
                continue;
            }
            const double rate = d * static_cast<double>(c);
            for (int dir : {+1, -1}) {
                table.events.push_back(EventClass{i, -1, k, dir, rate});
                table.total += rate;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double dij = micro.Dij[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (dij == 0.0) {
                continue;
            }
            for (int k = 0; k < M; ++k) {
                const long long ci = counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                const long long cj = counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                // Unordered co-located pairs: c_i c_j across species, c(c-1)/2 within.
                const double pairs = (i == j)
                                         ? 0.5 * static_cast<double>(ci) * static_cast<double>(ci - 1)
                                         : static_cast<double>(ci) * static_cast<double>(cj);
                if (pairs <= 0.0) {
                    continue;
                }
                const double rate = dij / static_cast<double>(N) * pairs;
                for (int dir : {+1, -1}) {
                    table.events.push_back(EventClass{i, j, k, dir, rate});
                    table.total += rate;
                }
            }
        }
    }
    return table;
}

} // namespace

RateTable event_rates(const ParticleConfig& config, const MicroParams& micro) {
    if (micro.n != config.species()) {
        throw std::invalid_argument("event_rates: species count mismatch");
    }
    return rates_from_counts(config.grid, config.counts, config.N, micro);
}

ParticleTrajectory ssa_run(const ParticleConfig& config0, const MicroParams& micro, double t_end,
                           std::uint64_t seed, const std::vector<double>& sample_times) {
    if (micro.n != config0.species()) {
        throw std::invalid_argument("ssa_run: species count mismatch");
    }
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("ssa_run: t_end must be positive");
    }

    CounterRng rng(seed);
    auto counts = config0.counts;
    const Grid grid = config0.grid;
    double t = 0.0;

    ParticleTrajectory traj;
    traj.grid = grid;
    std::size_t next_sample = 0;

    auto emit_through = [&](double upto) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= upto) {
            traj.times.push_back(sample_times[next_sample]);
            traj.counts.push_back(counts);
            ++next_sample;
        }
    };

    emit_through(t);
    while (t < t_end) {
        const RateTable table = rates_from_counts(grid, counts, config0.N, micro);
        if (table.total <= 0.0) {
            emit_through(t_end); // frozen configuration
            break;
        }
        const double tau = rng.next_exponential(table.total);
        const double t_next = t + tau;
        emit_through(std::min(t_next, t_end));
        if (t_next >= t_end) {
            break;
        }
        t = t_next;

        double r = rng.next_double() * table.total;
        const EventClass* chosen = &table.events.back();
        for (const auto& ev : table.events) {
            r -= ev.rate;
            if (r < 0.0) {
                chosen = &ev;
                break;
            }
        }
        const int dest = grid.wrap(chosen->site + chosen->direction);
        --counts[static_cast<std::size_t>(chosen->species_a)][static_cast<std::size_t>(chosen->site)];
        ++counts[static_cast<std::size_t>(chosen->species_a)][static_cast<std::size_t>(dest)];
        if (chosen->species_b >= 0) {
            --counts[static_cast<std::size_t>(chosen->species_b)][static_cast<std::size_t>(chosen->site)];
            ++counts[static_cast<std::size_t>(chosen->species_b)][static_cast<std::size_t>(dest)];
        }
    }
    emit_through(t_end);
    return traj;
}

std::vector<std::vector<double>> empirical_marginal(const ParticleTrajectory& traj, int species) {
    std::vector<std::vector<double>> out;
    out.reserve(traj.size());
    for (const auto& snapshot : traj.counts) {
        const auto& row = snapshot[static_cast<std::size_t>(species)];
        const double total =
            static_cast<double>(std::accumulate(row.begin(), row.end(), 0LL));
        std::vector<double> freq(row.size(), 0.0);
        if (total > 0.0) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                freq[k] = static_cast<double>(row[k]) / total;
            }
        }
        out.push_back(std::move(freq));
    }
    return out;
}

LabeledStateSpace::LabeledStateSpace(Grid g, std::vector<long long> per_species, long long N_in,
                                     long long enum_cap)
    : grid(g), particles_per_species(std::move(per_species)), N(N_in) {
    if (particles_per_species.empty()) {
        throw std::invalid_argument("LabeledStateSpace: need at least one species");
    }
    if (N < 1) {
        throw std::invalid_argument("LabeledStateSpace: N must be positive");
    }
    offsets_.reserve(particles_per_species.size());
    for (std::size_t i = 0; i < particles_per_species.size(); ++i) {
        if (particles_per_species[i] < 0) {
            throw std::invalid_argument("LabeledStateSpace: particle counts must be nonnegative");
        }
        offsets_.push_back(static_cast<int>(roster.size()));
        for (long long a = 0; a < particles_per_species[i]; ++a) {
            roster.push_back(static_cast<int>(i));
        }
    }
    if (roster.empty()) {
        throw std::invalid_argument("LabeledStateSpace: need at least one particle");
    }
    num_states = 1;
    pow_m_.reserve(roster.size());
    for (std::size_t t = 0; t < roster.size(); ++t) {
        pow_m_.push_back(num_states);
        if (num_states > enum_cap / grid.M) {
            std::ostringstream os;
            os << "LabeledStateSpace: M^P = " << grid.M << "^" << roster.size()
               << " exceeds the enumeration cap " << enum_cap;
            throw CapExceeded(os.str());
        }
        num_states *= grid.M;
    }
}

long long LabeledStateSpace::shifted(long long state, int slot, int dir) const {
    const int pos = position(state, slot);
    const int moved = grid.wrap(pos + dir);
    return state + static_cast<long long>(moved - pos) * pow_m_[static_cast<std::size_t>(slot)];
}

double Generator::max_exit_rate() const {
    double worst = 0.0;
    for (long long s = 0; s < dim; ++s) {
        for (std::size_t e = row_ptr[static_cast<std::size_t>(s)];
             e < row_ptr[static_cast<std::size_t>(s) + 1]; ++e) {
            if (col[e] == static_cast<std::uint32_t>(s)) {
                worst = std::max(worst, -val[e]);
            }
        }
    }
    return worst;
}

Generator build_generator(const LabeledStateSpace& space, const MicroParams& micro) {
    if (micro.n != static_cast<int>(space.particles_per_species.size())) {
        throw std::invalid_argument("build_generator: species count mismatch");
    }
    const int P = space.slots();
    Generator gen;
    gen.dim = space.num_states;
    gen.row_ptr.assign(static_cast<std::size_t>(space.num_states) + 1, 0);

    std::vector<std::pair<long long, double>> row;
    for (long long s = 0; s < space.num_states; ++s) {
        row.clear();
        for (int t = 0; t < P; ++t) {
            const double d = micro.D[static_cast<std::size_t>(space.roster[static_cast<std::size_t>(t)])];
            if (d == 0.0) {
                continue;
            }
            for (int dir : {+1, -1}) {
                row.emplace_back(space.shifted(s, t, dir), d);
            }
        }
        for (int t1 = 0; t1 < P; ++t1) {
            for (int t2 = t1 + 1; t2 < P; ++t2) {
                if (space.position(s, t1) != space.position(s, t2)) {
                    continue;
                }
                const int i = space.roster[static_cast<std::size_t>(t1)];
                const int j = space.roster[static_cast<std::size_t>(t2)];
                const double dij =
                    micro.Dij[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (dij == 0.0) {
                    continue;
                }
                const double rate = dij / static_cast<double>(space.N);
                for (int dir : {+1, -1}) {
                    row.emplace_back(space.shifted(space.shifted(s, t1, dir), t2, dir), rate);
                }
            }
        }
        double exit = 0.0;
        for (const auto& entry : row) {
            exit += entry.second;
        }
        row.emplace_back(s, -exit);
        std::sort(row.begin(), row.end());
        // merge duplicate targets (e.g. +1 and -1 coincide on M = 2)
        std::size_t kept = 0;
        for (std::size_t e = 0; e < row.size(); ++e) {
            if (kept > 0 && row[kept - 1].first == row[e].first) {
                row[kept - 1].second += row[e].second;
            } else {
                row[kept++] = row[e];
            }
        }
        row.resize(kept);
        for (const auto& entry : row) {
            gen.col.push_back(static_cast<std::uint32_t>(entry.first));
            gen.val.push_back(entry.second);
        }
        gen.row_ptr[static_cast<std::size_t>(s) + 1] = gen.col.size();
    }
    return gen;
}

std::vector<double> apply_to_distribution(const Generator& gen, const std::vector<double>& mu) {
    if (static_cast<long long>(mu.size()) != gen.dim) {
        throw std::invalid_argument("apply_to_distribution: dimension mismatch");
    }
    std::vector<double> out(mu.size(), 0.0);
    for (long long s = 0; s < gen.dim; ++s) {
        const double m = mu[static_cast<std::size_t>(s)];
        if (m == 0.0) {
            continue;
        }
        for (std::size_t e = gen.row_ptr[static_cast<std::size_t>(s)];
             e < gen.row_ptr[static_cast<std::size_t>(s) + 1]; ++e) {
            out[gen.col[e]] += gen.val[e] * m;
        }
    }
    return out;
}

std::vector<double> evolve_mu(const LabeledStateSpace& space, const Generator& gen,
                              std::vector<double> mu0, double t) {
    if (static_cast<long long>(mu0.size()) != space.num_states || gen.dim != space.num_states) {
        throw std::invalid_argument("evolve_mu: dimension mismatch");
    }
    double sum = 0.0;
    for (double v : mu0) {
        if (v < -1e-15) {
            throw std::invalid_argument("evolve_mu: mu0 has negative entries");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("evolve_mu: mu0 does not sum to one");
    }
    if (!(t > 0.0)) {
        return mu0;
    }
    const double worst = gen.max_exit_rate();
    if (worst <= 0.0) {
        return mu0;
    }
    const int steps = static_cast<int>(std::ceil(t / (0.1 / worst)));
    const double dt = t / steps;
    const std::size_t dim = mu0.size();
    std::vector<double> stage(dim);
    for (int s = 0; s < steps; ++s) {
        const std::vector<double> k1 = apply_to_distribution(gen, mu0);
        for (std::size_t x = 0; x < dim; ++x) stage[x] = mu0[x] + 0.5 * dt * k1[x];
        const std::vector<double> k2 = apply_to_distribution(gen, stage);
        for (std::size_t x = 0; x < dim; ++x) stage[x] = mu0[x] + 0.5 * dt * k2[x];
        const std::vector<double> k3 = apply_to_distribution(gen, stage);
        for (std::size_t x = 0; x < dim; ++x) stage[x] = mu0[x] + dt * k3[x];
        const std::vector<double> k4 = apply_to_distribution(gen, stage);
        for (std::size_t x = 0; x < dim; ++x) {
            mu0[x] += dt / 6.0 * (k1[x] + 2.0 * k2[x] + 2.0 * k3[x] + k4[x]);
        }
    }
    return mu0;
}

double micro_entropy(const LabeledStateSpace& space, const std::vector<double>& mu) {
    if (static_cast<long long>(mu.size()) != space.num_states) {
        throw std::invalid_argument("micro_entropy: dimension mismatch");
    }
    const double log_states = static_cast<double>(space.slots()) * std::log(static_cast<double>(space.grid.M));
    double sum = 0.0;
    for (double v : mu) {
        if (!(v > 0.0)) {
            throw NonPositiveMeasure("micro_entropy: measure must be strictly positive");
        }
        sum += v * (std::log(v) + log_states);
    }
    return sum;
}

namespace {

// Little-endian mixed-radix index of explicit positions in a marginal space.
long long encode_positions(const std::vector<int>& pos, int M) {
    long long idx = 0;
    for (std::size_t t = pos.size(); t-- > 0;) {
        idx = idx * M + pos[t];
    }
    return idx;
}

void check_multi_index(const LabeledStateSpace& space, const std::vector<long long>& p) {
    if (p.size() != space.particles_per_species.size()) {
        throw BadMultiIndex("marginal multi-index length must equal the species count");
    }
    long long total = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || p[i] > space.particles_per_species[i]) {
            throw BadMultiIndex("marginal multi-index exceeds the per-species particle count");
        }
        total += p[i];
    }
    if (total == 0) {
        throw BadMultiIndex("marginal multi-index must retain at least one particle");
    }
}

void check_symmetry(const LabeledStateSpace& space, const std::vector<double>& mu) {
    const int n = static_cast<int>(space.particles_per_species.size());
    for (int i = 0; i < n; ++i) {
        const int offset = space.species_offset(i);
        for (long long a = 0; a + 1 < space.particles_per_species[static_cast<std::size_t>(i)]; ++a) {
            const int slot1 = offset + static_cast<int>(a);
            const int slot2 = slot1 + 1;
            for (long long s = 0; s < space.num_states; ++s) {
                const int p1 = space.position(s, slot1);
                const int p2 = space.position(s, slot2);
                if (p1 == p2) {
                    continue;
                }
                long long swapped = space.shifted(s, slot1, p2 - p1);
                swapped = space.shifted(swapped, slot2, p1 - p2);
                if (std::abs(mu[static_cast<std::size_t>(s)] - mu[static_cast<std::size_t>(swapped)]) > 1e-12) {
                    throw SymmetryViolation(
                        "bbgky_check: measure is not exchangeable within species");
                }
            }
        }
    }
}

} // namespace

Marginal project_marginal(const LabeledStateSpace& space, const std::vector<double>& mu,
                          const std::vector<long long>& p) {
    check_multi_index(space, p);
    if (static_cast<long long>(mu.size()) != space.num_states) {
        throw std::invalid_argument("project_marginal: dimension mismatch");
    }

    // Retained slots, in roster order of the marginal space.
    std::vector<int> kept;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const int offset = space.species_offset(static_cast<int>(i));
        for (long long a = 0; a < p[i]; ++a) {
            kept.push_back(offset + static_cast<int>(a));
        }
    }

    Marginal out;
    out.p = p;
    out.grid = space.grid;
    out.num_states = 1;
    for (std::size_t t = 0; t < kept.size(); ++t) {
        out.num_states *= space.grid.M;
    }
    out.dist.assign(static_cast<std::size_t>(out.num_states), 0.0);

    std::vector<int> pos(kept.size());
    for (long long s = 0; s < space.num_states; ++s) {
        for (std::size_t t = 0; t < kept.size(); ++t) {
            pos[t] = space.position(s, kept[t]);
        }
        out.dist[static_cast<std::size_t>(encode_positions(pos, space.grid.M))] +=
            mu[static_cast<std::size_t>(s)];
    }
    return out;
}

double bbgky_check(const LabeledStateSpace& space, const MicroParams& micro,
                   const std::vector<double>& mu, const std::vector<long long>& p) {
    check_multi_index(space, p);
    if (micro.n != static_cast<int>(space.particles_per_species.size())) {
        throw std::invalid_argument("bbgky_check: species count mismatch");
    }
    check_symmetry(space, mu);

    const int n = micro.n;
    const int M = space.grid.M;

    // Reference side: project the full generator action.
    const Generator gen = build_generator(space, micro);
    const Marginal lhs = project_marginal(space, apply_to_distribution(gen, mu), p);

    // Marginals feeding the I + II + III decomposition.
    const Marginal mup = project_marginal(space, mu, p);
    const LabeledStateSpace pspace(space.grid, p, space.N, space.num_states);
    std::vector<Marginal> mup_plus(static_cast<std::size_t>(n));
    std::vector<long long> excess(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
        excess[static_cast<std::size_t>(j)] =
            space.particles_per_species[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(j)];
        if (excess[static_cast<std::size_t>(j)] > 0) {
            auto pj = p;
            ++pj[static_cast<std::size_t>(j)];
            mup_plus[static_cast<std::size_t>(j)] = project_marginal(space, mu, pj);
        }
    }

    const int P = pspace.slots();
    std::vector<int> pos(static_cast<std::size_t>(P));
    std::vector<int> ext(static_cast<std::size_t>(P) + 1);

    double residual = 0.0;
    for (long long y = 0; y < pspace.num_states; ++y) {
        for (int t = 0; t < P; ++t) {
            pos[static_cast<std::size_t>(t)] = pspace.position(y, t);
        }
        const double center = mup.dist[static_cast<std::size_t>(y)];
        double value = 0.0;

        // I: linear diffusion of the retained particles.
        for (int t = 0; t < P; ++t) {
            const double d = micro.D[static_cast<std::size_t>(pspace.roster[static_cast<std::size_t>(t)])];
            if (d == 0.0) {
                continue;
            }
            value += d * (mup.dist[static_cast<std::size_t>(pspace.shifted(y, t, +1))] +
                          mup.dist[static_cast<std::size_t>(pspace.shifted(y, t, -1))] - 2.0 * center);
        }

        // II: pair jumps of two retained co-located particles.
        for (int t1 = 0; t1 < P; ++t1) {
            for (int t2 = t1 + 1; t2 < P; ++t2) {
                if (pos[static_cast<std::size_t>(t1)] != pos[static_cast<std::size_t>(t2)]) {
                    continue;
                }
                const int i = pspace.roster[static_cast<std::size_t>(t1)];
                const int j = pspace.roster[static_cast<std::size_t>(t2)];
                const double dij =
                    micro.Dij[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (dij == 0.0) {
                    continue;
                }
                const long long up = pspace.shifted(pspace.shifted(y, t1, +1), t2, +1);
                const long long down = pspace.shifted(pspace.shifted(y, t1, -1), t2, -1);
                value += dij / static_cast<double>(space.N) *
                         (mup.dist[static_cast<std::size_t>(up)] +
                          mup.dist[static_cast<std::size_t>(down)] - 2.0 * center);
            }
        }

        // III: pair jumps of a retained particle with an averaged one of
        // species j, inserted at the same site; prefactor (count_j - p_j)/N.
        for (int t = 0; t < P; ++t) {
            const int i = pspace.roster[static_cast<std::size_t>(t)];
            for (int j = 0; j < n; ++j) {
                if (excess[static_cast<std::size_t>(j)] <= 0) {
                    continue;
                }
                const double dij =
                    micro.Dij[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (dij == 0.0) {
                    continue;
                }
                const double prefactor = dij *
                                         static_cast<double>(excess[static_cast<std::size_t>(j)]) /
                                         static_cast<double>(space.N);
                // Insert the extra species-j coordinate right after species j's
                // retained block; the marginal roster orders species blocks.
                int insert_at = 0;
                for (int s = 0; s <= j; ++s) {
                    insert_at += static_cast<int>(p[static_cast<std::size_t>(s)]);
                }
                const int site = pos[static_cast<std::size_t>(t)];
                int ti_ext = t < insert_at ? t : t + 1;
                for (int s = 0; s < insert_at; ++s) {
                    ext[static_cast<std::size_t>(s)] = pos[static_cast<std::size_t>(s)];
                }
                ext[static_cast<std::size_t>(insert_at)] = site;
                for (int s = insert_at; s < P; ++s) {
                    ext[static_cast<std::size_t>(s) + 1] = pos[static_cast<std::size_t>(s)];
                }
                const auto& dist = mup_plus[static_cast<std::size_t>(j)].dist;
                const long long base = encode_positions(ext, M);
                double local = -2.0 * dist[static_cast<std::size_t>(base)];
                for (int dir : {+1, -1}) {
                    auto moved = ext;
                    moved[static_cast<std::size_t>(ti_ext)] =
                        space.grid.wrap(moved[static_cast<std::size_t>(ti_ext)] + dir);
                    moved[static_cast<std::size_t>(insert_at)] =
                        space.grid.wrap(moved[static_cast<std::size_t>(insert_at)] + dir);
                    local += dist[static_cast<std::size_t>(encode_positions(moved, M))];
                }
                value += prefactor * local;
            }
        }

        residual = std::max(residual, std::abs(lhs.dist[static_cast<std::size_t>(y)] - value));
    }
    return residual;
}

std::vector<double> product_distribution(const LabeledStateSpace& space,
                                         const std::vector<std::vector<double>>& site_laws) {
    if (site_laws.size() != space.particles_per_species.size()) {
        throw std::invalid_argument("product_distribution: species count mismatch");
    }
    for (const auto& law : site_laws) {
        if (static_cast<int>(law.size()) != space.grid.M) {
            throw std::invalid_argument("product_distribution: site law length mismatch");
        }
    }
    std::vector<double> mu(static_cast<std::size_t>(space.num_states), 0.0);
    for (long long s = 0; s < space.num_states; ++s) {
        double v = 1.0;
        for (int t = 0; t < space.slots(); ++t) {
            v *= site_laws[static_cast<std::size_t>(space.roster[static_cast<std::size_t>(t)])]
                          [static_cast<std::size_t>(space.position(s, t))];
        }
        mu[static_cast<std::size_t>(s)] = v;
    }
    return mu;
}

std::vector<double> random_symmetric_distribution(const LabeledStateSpace& space,
                                                  std::uint64_t seed) {
    const int n = static_cast<int>(space.particles_per_species.size());
    const int M = space.grid.M;
    std::vector<double> mu(static_cast<std::size_t>(space.num_states), 0.0);
    std::vector<int> occupancy(static_cast<std::size_t>(n * M));
    double total = 0.0;
    for (long long s = 0; s < space.num_states; ++s) {
        std::fill(occupancy.begin(), occupancy.end(), 0);
        for (int t = 0; t < space.slots(); ++t) {
            const int i = space.roster[static_cast<std::size_t>(t)];
            ++occupancy[static_cast<std::size_t>(i * M + space.position(s, t))];
        }
        // Weight depends on the state only through occupation numbers, which
        // makes the measure exchangeable by construction.
        std::uint64_t h = mix64(seed);
        for (int c : occupancy) {
            h = mix64(h ^ static_cast<std::uint64_t>(c + 1));
        }
        const double v = 0.1 + static_cast<double>(h >> 11) * 0x1.0p-53;
        mu[static_cast<std::size_t>(s)] = v;
        total += v;
    }
    for (double& v : mu) {
        v /= total;
    }
    return mu;
}

} // namespace sktk
