#include "sktk/master.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sktk/errors.hpp"

namespace sktk {

namespace {

void check_dims(const DiscreteState& state, const ModelParams& params) {
    if (state.species() != params.n) {
        throw std::invalid_argument("state species count does not match model");
    }
    for (const auto& row : state.u) {
        if (static_cast<int>(row.size()) != state.grid.M) {
            throw std::invalid_argument("state row length does not match grid");
        }
    }
}

// Second difference u(k+1) + u(k-1) - 2 u(k) applied in place of the 1/h^2
// laplacian where the caller supplies the scaling.
inline double second_diff(const std::vector<double>& v, int k, int M) {
    const int kp = (k + 1 == M) ? 0 : k + 1;
    const int km = (k == 0) ? M - 1 : k - 1;
    return v[static_cast<std::size_t>(kp)] + v[static_cast<std::size_t>(km)] -
           2.0 * v[static_cast<std::size_t>(k)];
}

Matrix rhs_unchecked(const Grid& grid, const Matrix& u, const ModelParams& params) {
    const int n = params.n;
    const int M = grid.M;
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    Matrix out(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(M), 0.0));
    std::vector<double> flux(static_cast<std::size_t>(M));
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        // flux_k = D_i u_i(k) + u_i(k) sum_j A_ij u_j(k)
        for (int k = 0; k < M; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            double cross = 0.0;
            for (int j = 0; j < n; ++j) {
                cross += params.A[ui][static_cast<std::size_t>(j)] *
                         u[static_cast<std::size_t>(j)][uk];
            }
            flux[uk] = params.D[ui] * u[ui][uk] + u[ui][uk] * cross;
        }
        for (int k = 0; k < M; ++k) {
            out[ui][static_cast<std::size_t>(k)] = second_diff(flux, k, M) * inv_h2;
        }
    }
    return out;
}

bool above_floor(const Matrix& u, double floor_value) {
    for (const auto& row : u) {
        for (double v : row) {
            if (!(v > floor_value) || !std::isfinite(v)) {
                return false;
            }
        }
    }
    return true;
}

// One raw RK4 stage combination; no positivity logic.
Matrix rk4_raw(const Grid& grid, const Matrix& u, const ModelParams& params, double dt) {
    const std::size_t n = u.size();
    const std::size_t M = u[0].size();

    auto axpy = [&](const Matrix& base, const Matrix& k, double c) {
        Matrix out(base);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 0; m < M; ++m) {
                out[i][m] += c * k[i][m];
            }
        }
        return out;
    };

    const Matrix k1 = rhs_unchecked(grid, u, params);
    const Matrix k2 = rhs_unchecked(grid, axpy(u, k1, 0.5 * dt), params);
    const Matrix k3 = rhs_unchecked(grid, axpy(u, k2, 0.5 * dt), params);
    const Matrix k4 = rhs_unchecked(grid, axpy(u, k3, dt), params);

    Matrix out(u);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < M; ++m) {
            out[i][m] += w * (k1[i][m] + 2.0 * k2[i][m] + 2.0 * k3[i][m] + k4[i][m]);
        }
    }
    return out;
}

} // namespace

DiscreteState::DiscreteState(Grid g, Matrix values, double t)
    : grid(g), u(std::move(values)), time(t) {
    for (const auto& row : u) {
        if (static_cast<int>(row.size()) != grid.M) {
            throw std::invalid_argument("DiscreteState: row length must equal the site count");
        }
    }
}

Matrix rhs(const DiscreteState& state, const ModelParams& params) {
    check_dims(state, params);
    return rhs_unchecked(state.grid, state.u, params);
}

double stable_dt(const DiscreteState& state, const ModelParams& params, double cfl) {
    double max_d = 0.0;
    double max_row_a = 0.0;
    double max_u = 0.0;
    for (int i = 0; i < params.n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        max_d = std::max(max_d, params.D[ui]);
        double row = 0.0;
        for (double a : params.A[ui]) {
            row += a;
        }
        max_row_a = std::max(max_row_a, row);
        for (double v : state.u[ui]) {
            max_u = std::max(max_u, v);
        }
    }
    const double denom = 2.0 * max_d + 2.0 * max_row_a * max_u;
    const double h2 = state.grid.h * state.grid.h;
    if (denom <= 0.0) {
        return cfl * h2; // pure zero dynamics; any step works
    }
    return cfl * h2 / denom;
}

DiscreteState step(const DiscreteState& state, const ModelParams& params, double dt,
                   const StepPolicy& policy) {
    check_dims(state, params);
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step: dt must be positive");
    }
    if (!above_floor(state.u, 0.0)) {
        throw NonPositiveState("step: state must be strictly positive");
    }
    double attempt = dt;
    for (int halving = 0; halving <= policy.max_halvings; ++halving) {
        Matrix next = rk4_raw(state.grid, state.u, params, attempt);
        if (above_floor(next, policy.pos_floor)) {
            return DiscreteState(state.grid, std::move(next), state.time + attempt);
        }
        attempt *= 0.5;
    }
    std::ostringstream os;
    os << "step: positivity could not be maintained after " << policy.max_halvings
       << " halvings at t = " << state.time;
    throw StepFailure(os.str());
}

Trajectory solve(const DiscreteState& u0, const ModelParams& params, double T,
                 const StepPolicy& policy, const std::vector<double>& sample_times) {
    check_dims(u0, params);
    if (!(T > 0.0)) {
        throw std::invalid_argument("solve: horizon T must be positive");
    }
    if (!above_floor(u0.u, 0.0)) {
        throw NonPositiveState("solve: initial data must be strictly positive");
    }

    Trajectory traj;
    traj.grid = u0.grid;

    DiscreteState state = u0;
    std::size_t next_sample = 0;
    const double t_tol = 1e-12 * std::max(1.0, T);

    auto emit_due = [&](const DiscreteState& s) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= s.time + t_tol) {
            traj.times.push_back(sample_times[next_sample]);
            traj.states.push_back(s.u);
            ++next_sample;
        }
    };

    emit_due(state);
    while (state.time < T - t_tol) {
        double dt = stable_dt(state, params, policy.cfl);
        dt = std::min(dt, T - state.time);
        if (next_sample < sample_times.size()) {
            dt = std::min(dt, std::max(sample_times[next_sample] - state.time, t_tol));
        }
        state = step(state, params, dt, policy);
        emit_due(state);
    }
    emit_due(state);
    return traj;
}

double entropy(const DiscreteState& state, const ModelParams& params) {
    check_dims(state, params);
    double sum = 0.0;
    for (int i = 0; i < params.n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        double species_sum = 0.0;
        for (double v : state.u[ui]) {
            if (!(v > 0.0)) {
                throw NonPositiveState("entropy: state must be strictly positive");
            }
            species_sum += v * std::log(v) - v + 1.0;
        }
        sum += params.pi[ui] * species_sum;
    }
    return state.grid.h * sum;
}

EntropyDiagnostics dissipation(const DiscreteState& state, const ModelParams& params) {
    check_dims(state, params);
    const int n = params.n;
    const int M = state.grid.M;
    const double h = state.grid.h;

    for (const auto& row : state.u) {
        for (double v : row) {
            if (!(v > 0.0)) {
                throw NonPositiveState("dissipation: state must be strictly positive");
            }
        }
    }

    EntropyDiagnostics diag;
    diag.entropy = entropy(state, params);
    diag.grad_l2.assign(static_cast<std::size_t>(n), 0.0);
    diag.mass.assign(static_cast<std::size_t>(n), 0.0);

    auto fwd = [&](const std::vector<double>& v, int k) {
        const int kp = (k + 1 == M) ? 0 : k + 1;
        return (v[static_cast<std::size_t>(kp)] - v[static_cast<std::size_t>(k)]) / h;
    };

    double linear_term = 0.0;      // sum_i D_i pi_i sum_k (grad log u_i)(grad u_i)
    double pair_term = 0.0;        // sum_{i,j} a_ij sum_k (grad log(u_i u_j))(grad (u_i u_j)) / 2
    double sqrt_linear = 0.0;      // sum_i D_i pi_i sum_k |grad sqrt(u_i)|^2
    double sqrt_pair = 0.0;        // sum_{i,j} a_ij sum_k |grad sqrt(u_i u_j)|^2

    std::vector<double> log_u(static_cast<std::size_t>(M));
    std::vector<double> sqrt_u(static_cast<std::size_t>(M));
    std::vector<double> prod(static_cast<std::size_t>(M));
    std::vector<double> log_prod(static_cast<std::size_t>(M));
    std::vector<double> sqrt_prod(static_cast<std::size_t>(M));

    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const auto& u_i = state.u[ui];
        for (int k = 0; k < M; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            log_u[uk] = std::log(u_i[uk]);
            sqrt_u[uk] = std::sqrt(u_i[uk]);
            diag.mass[ui] += u_i[uk];
        }
        diag.mass[ui] *= h;
        double grad2 = 0.0;
        double ll = 0.0;
        double ss = 0.0;
        for (int k = 0; k < M; ++k) {
            const double gu = fwd(u_i, k);
            grad2 += gu * gu;
            ll += fwd(log_u, k) * gu;
            const double gs = fwd(sqrt_u, k);
            ss += gs * gs;
        }
        diag.grad_l2[ui] = h * grad2;
        linear_term += params.D[ui] * params.pi[ui] * ll;
        sqrt_linear += params.D[ui] * params.pi[ui] * ss;

        for (int j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            const double a_ij = params.pi[ui] * params.A[ui][uj]; // tilde a_ij
            if (a_ij == 0.0) {
                continue;
            }
            const auto& u_j = state.u[uj];
            for (int k = 0; k < M; ++k) {
                const auto uk = static_cast<std::size_t>(k);
                prod[uk] = u_i[uk] * u_j[uk];
                log_prod[uk] = std::log(prod[uk]);
                sqrt_prod[uk] = std::sqrt(prod[uk]);
            }
            double lp = 0.0;
            double sp = 0.0;
            for (int k = 0; k < M; ++k) {
                lp += fwd(log_prod, k) * fwd(prod, k);
                const double gs = fwd(sqrt_prod, k);
                sp += gs * gs;
            }
            pair_term += 0.5 * a_ij * lp;
            sqrt_pair += a_ij * sp;
        }
    }

    diag.dissipation = -h * (linear_term + pair_term);
    diag.sqrt_lower_bound = h * (4.0 * sqrt_linear + 2.0 * sqrt_pair);
    return diag;
}

} // namespace sktk
