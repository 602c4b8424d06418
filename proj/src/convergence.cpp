#include "sktk/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sktk/errors.hpp"
#include "sktk/fit.hpp"
#include "sktk/parallel.hpp"

namespace sktk {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr double kGaussNode[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                  0.5384693101056831, 0.9061798459386640};
constexpr double kGaussWeight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t s = 1; s < t.size(); ++s) {
        acc += 0.5 * (t[s] - t[s - 1]) * (f[s] + f[s - 1]);
    }
    return acc;
}

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

} // namespace

TestFunction bump_test_function(double support_end, int mode, double phase,
                                const std::string& name) {
    if (!(support_end > 0.0)) {
        throw std::invalid_argument("bump_test_function: support_end must be positive");
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double omega = two_pi * mode;

    auto psi = [support_end](double t) {
        const double s = t / support_end;
        if (s >= 1.0 || t < 0.0) {
            return 0.0;
        }
        return std::exp(1.0 - 1.0 / (1.0 - s * s));
    };
    auto dpsi = [support_end, psi](double t) {
        const double s = t / support_end;
        if (s >= 1.0 || t < 0.0) {
            return 0.0;
        }
        const double denom = 1.0 - s * s;
        return psi(t) * (-2.0 * s / (denom * denom)) / support_end;
    };

    TestFunction phi;
    phi.name = name;
    phi.value = [psi, omega, phase](double t, double x) {
        return psi(t) * std::sin(omega * x + phase);
    };
    phi.time_derivative = [dpsi, omega, phase](double t, double x) {
        return dpsi(t) * std::sin(omega * x + phase);
    };
    phi.laplacian = [psi, omega, phase](double t, double x) {
        return -omega * omega * psi(t) * std::sin(omega * x + phase);
    };
    return phi;
}

std::vector<SpaceProfile> default_dual_probes() {
    constexpr double two_pi = 6.283185307179586476925286766559;
    std::vector<SpaceProfile> probes;
    probes.push_back({"cos2pix", [](double x) { return std::cos(two_pi * x); },
                      [](double x) { return -two_pi * std::sin(two_pi * x); }});
    probes.push_back({"sin2pix", [](double x) { return std::sin(two_pi * x); },
                      [](double x) { return two_pi * std::cos(two_pi * x); }});
    probes.push_back({"cos4pix", [](double x) { return std::cos(2.0 * two_pi * x); },
                      [](double x) { return -2.0 * two_pi * std::sin(2.0 * two_pi * x); }});
    return probes;
}

double weak_residual(const Trajectory& traj, const ModelParams& params, const TestFunction& phi,
                     int species) {
    if (traj.size() < 200) {
        throw std::invalid_argument("weak_residual: need at least 200 trajectory samples");
    }
    const int n = params.n;
    const int M = traj.grid.M;
    const double h = traj.grid.h;
    const auto ui = static_cast<std::size_t>(species);

    // Quadrature points: per cell k the abscissae x_k + alpha_q h, where the
    // interpolants are linear with fixed barycentric weight alpha_q.
    double alpha[5];
    double weight[5];
    for (int q = 0; q < 5; ++q) {
        alpha[q] = 0.5 * (1.0 + kGaussNode[q]);
        weight[q] = 0.5 * h * kGaussWeight[q];
    }

    auto space_integrals = [&](const Matrix& u, double t, double& used_dt, double& used_flux) {
        used_dt = 0.0;
        used_flux = 0.0;
        for (int k = 0; k < M; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            const auto ukp = static_cast<std::size_t>((k + 1) % M);
            for (int q = 0; q < 5; ++q) {
                const double x = (static_cast<double>(k) + alpha[q]) * h;
                const double ui_x =
                    (1.0 - alpha[q]) * u[ui][uk] + alpha[q] * u[ui][ukp];
                double flux = params.D[ui] * ui_x;
                for (int j = 0; j < n; ++j) {
                    const auto ujj = static_cast<std::size_t>(j);
                    const double uj_x =
                        (1.0 - alpha[q]) * u[ujj][uk] + alpha[q] * u[ujj][ukp];
                    flux += params.A[ui][ujj] * ui_x * uj_x;
                }
                const double lap_phi =
                    (phi.value(t, x + h) + phi.value(t, x - h) - 2.0 * phi.value(t, x)) /
                    (h * h);
                used_dt += weight[q] * ui_x * phi.time_derivative(t, x);
                used_flux += weight[q] * flux * lap_phi;
            }
        }
    };

    // - int u~(0) phi(0)
    double initial_term = 0.0;
    for (int k = 0; k < M; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const auto ukp = static_cast<std::size_t>((k + 1) % M);
        for (int q = 0; q < 5; ++q) {
            const double x = (static_cast<double>(k) + alpha[q]) * h;
            const double ui_x =
                (1.0 - alpha[q]) * traj.states[0][ui][uk] + alpha[q] * traj.states[0][ui][ukp];
            initial_term += weight[q] * ui_x * phi.value(traj.times[0], x);
        }
    }

    std::vector<double> f_dt(traj.size());
    std::vector<double> f_flux(traj.size());
    for (std::size_t s = 0; s < traj.size(); ++s) {
        space_integrals(traj.states[s], traj.times[s], f_dt[s], f_flux[s]);
    }
    const double dt_term = trapezoid(traj.times, f_dt);
    const double flux_term = trapezoid(traj.times, f_flux);
    return std::abs(-initial_term - dt_term - flux_term);
}

double weak_residual_max(const Trajectory& traj, const ModelParams& params,
                         const TestFunction& phi) {
    double worst = 0.0;
    for (int i = 0; i < params.n; ++i) {
        worst = std::max(worst, weak_residual(traj, params, phi, i));
    }
    return worst;
}

double product_interpolant_gap(const Trajectory& traj, int i, int j) {
    const int M = traj.grid.M;
    const double h = traj.grid.h;
    const auto si = static_cast<std::size_t>(i);
    const auto sj = static_cast<std::size_t>(j);
    std::vector<double> f(traj.size(), 0.0);
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const auto& u = traj.states[s];
        double acc = 0.0;
        for (int k = 0; k < M; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            const auto ukp = static_cast<std::size_t>((k + 1) % M);
            acc += (u[si][uk] + u[si][ukp]) * std::abs(u[sj][ukp] - u[sj][uk]);
        }
        f[s] = h / 6.0 * acc;
    }
    return trapezoid(traj.times, f);
}

double interpolant_l2_distance(const Trajectory& coarse, const Trajectory& fine) {
    if (coarse.size() != fine.size()) {
        throw std::invalid_argument("interpolant_l2_distance: trajectories must share sample times");
    }
    const int mc = coarse.grid.M;
    const int mf = fine.grid.M;
    if (mf % mc != 0) {
        throw std::invalid_argument("interpolant_l2_distance: coarse grid must divide fine grid");
    }
    const int ratio = mf / mc;
    const double hf = fine.grid.h;
    const std::size_t n = fine.states.empty() ? 0 : fine.states[0].size();

    std::vector<double> f(fine.size(), 0.0);
    std::vector<double> diff(static_cast<std::size_t>(mf));
    for (std::size_t s = 0; s < fine.size(); ++s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (int kf = 0; kf < mf; ++kf) {
                const int kc = kf / ratio;
                const double a = static_cast<double>(kf - kc * ratio) / ratio;
                const double coarse_val =
                    (1.0 - a) * coarse.states[s][i][static_cast<std::size_t>(kc)] +
                    a * coarse.states[s][i][static_cast<std::size_t>((kc + 1) % mc)];
                diff[static_cast<std::size_t>(kf)] =
                    fine.states[s][i][static_cast<std::size_t>(kf)] - coarse_val;
            }
            for (int kf = 0; kf < mf; ++kf) {
                const double A = diff[static_cast<std::size_t>(kf)];
                const double B = diff[static_cast<std::size_t>((kf + 1) % mf)];
                acc += hf / 3.0 * (A * A + A * B + B * B);
            }
        }
        f[s] = acc;
    }
    return std::sqrt(trapezoid(fine.times, f));
}

RefinementStudy refinement_study(const ModelParams& params, const InitialData& u0,
                                 const std::vector<int>& M_list, double T,
                                 const std::vector<TestFunction>& phis, int n_samples,
                                 const StepPolicy& policy) {
    if (M_list.size() < 2) {
        throw std::invalid_argument("refinement_study: need at least two grid sizes");
    }
    for (std::size_t m = 0; m < M_list.size(); ++m) {
        if (!is_power_of_two(M_list[m])) {
            throw std::invalid_argument("refinement_study: M_list entries must be powers of two");
        }
        if (m > 0 && M_list[m] <= M_list[m - 1]) {
            throw std::invalid_argument("refinement_study: M_list must be strictly increasing");
        }
    }
    if (n_samples < 200) {
        throw std::invalid_argument("refinement_study: need at least 200 samples");
    }

    std::vector<double> sample_times(static_cast<std::size_t>(n_samples));
    for (int s = 0; s < n_samples; ++s) {
        sample_times[static_cast<std::size_t>(s)] =
            T * static_cast<double>(s) / static_cast<double>(n_samples - 1);
    }

    const std::size_t levels = M_list.size();
    const int n = params.n;
    const auto probes = default_dual_probes();

    RefinementStudy study;
    study.M_list = M_list;
    study.gradient_integral.assign(levels, 0.0);
    study.l4_integral.assign(levels, 0.0);
    study.dual_derivative_bound.assign(levels, 0.0);
    study.entropy_sup.assign(levels, 0.0);
    study.entropy_monotone.assign(levels, 1);
    study.weak_residual_per_phi.assign(levels, std::vector<double>(phis.size(), 0.0));
    study.product_gap.assign(levels, 0.0);

    std::vector<Trajectory> trajectories(levels);

    parallel_for_index(levels, [&](std::size_t m) {
        const Grid grid(M_list[m]);
        const Matrix u0_nodes = sample_initial(u0, n, grid);
        const DiscreteState start(grid, u0_nodes, 0.0);
        const Trajectory traj = solve(start, params, T, policy, sample_times);
        trajectories[m] = traj;

        // Entropy monitor.
        double sup_h = 0.0;
        double prev_h = 0.0;
        bool monotone = true;
        std::vector<double> grad_series(traj.size());
        std::vector<double> l4_series(traj.size());
        for (std::size_t s = 0; s < traj.size(); ++s) {
            const DiscreteState state = traj.at(s);
            const double H = entropy(state, params);
            if (s > 0 && H > prev_h + 1e-10) {
                monotone = false;
            }
            prev_h = H;
            sup_h = std::max(sup_h, H);

            double grad = 0.0;
            double l4 = 0.0;
            for (int i = 0; i < n; ++i) {
                GridFunction w(grid, state.u[static_cast<std::size_t>(i)]);
                const GridFunction g = forward_diff(w);
                double g2 = 0.0;
                for (double v : g.values) {
                    g2 += v * v;
                }
                grad += grid.h * g2;
                const double norm4 = interpolant_lp_norm(w, 4.0);
                l4 += norm4 * norm4 * norm4 * norm4;
            }
            grad_series[s] = grad;
            l4_series[s] = l4;
        }
        study.entropy_sup[m] = sup_h;
        study.entropy_monotone[m] = monotone ? 1 : 0;
        study.gradient_integral[m] = trapezoid(traj.times, grad_series);
        study.l4_integral[m] = trapezoid(traj.times, l4_series);

        // Dual-norm time-derivative monitor: d/dt int u~ phi dx equals
        // sum_k rhs_i(x_k) int T(x - x_k) phi(x) dx.
        double worst_dual = 0.0;
        std::vector<Matrix> rhs_series(traj.size());
        for (std::size_t s = 0; s < traj.size(); ++s) {
            rhs_series[s] = rhs(traj.at(s), params);
        }
        for (const auto& probe : probes) {
            std::vector<double> hat_weights(static_cast<std::size_t>(grid.M), 0.0);
            double sup_phi = 0.0;
            double sup_dphi = 0.0;
            for (int s = 0; s < 1024; ++s) {
                const double x = static_cast<double>(s) / 1024.0;
                sup_phi = std::max(sup_phi, std::abs(probe.value(x)));
                sup_dphi = std::max(sup_dphi, std::abs(probe.derivative(x)));
            }
            const double w1inf = std::max(sup_phi, sup_dphi);
            for (int k = 0; k < grid.M; ++k) {
                double acc = 0.0;
                for (int q = 0; q < 5; ++q) {
                    const double a = 0.5 * (1.0 + kGaussNode[q]);
                    const double wq = 0.5 * grid.h * kGaussWeight[q];
                    // right cell [x_k, x_k + h]: T = 1 - a; left cell: T = a
                    acc += wq * (1.0 - a) * probe.value(grid.site(k) + a * grid.h);
                    acc += wq * a * probe.value(grid.site(k) - grid.h + a * grid.h);
                }
                hat_weights[static_cast<std::size_t>(k)] = acc;
            }
            for (int i = 0; i < n; ++i) {
                std::vector<double> series(traj.size());
                for (std::size_t s = 0; s < traj.size(); ++s) {
                    double pairing = 0.0;
                    for (int k = 0; k < grid.M; ++k) {
                        pairing += rhs_series[s][static_cast<std::size_t>(i)]
                                             [static_cast<std::size_t>(k)] *
                                   hat_weights[static_cast<std::size_t>(k)];
                    }
                    series[s] = std::abs(pairing);
                }
                worst_dual = std::max(worst_dual, trapezoid(traj.times, series) / w1inf);
            }
        }
        rhs_series.clear();
        study.dual_derivative_bound[m] = worst_dual;

        for (std::size_t p = 0; p < phis.size(); ++p) {
            study.weak_residual_per_phi[m][p] = weak_residual_max(traj, params, phis[p]);
        }
        double worst_gap = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                worst_gap = std::max(worst_gap, product_interpolant_gap(traj, i, j));
            }
        }
        study.product_gap[m] = worst_gap;
    });

    for (std::size_t m = 0; m + 1 < levels; ++m) {
        study.successive_l2_diff.push_back(
            interpolant_l2_distance(trajectories[m], trajectories[m + 1]));
    }

    // Consistency of the discrete versus continuum laplacian of phi, paired
    // with the flux on the finest grid.
    {
        const Trajectory& fine = trajectories[levels - 1];
        const Grid grid = fine.grid;
        const double h = grid.h;
        for (const auto& phi : phis) {
            std::vector<double> series(fine.size(), 0.0);
            for (std::size_t s = 0; s < fine.size(); ++s) {
                const double t = fine.times[s];
                const auto& u = fine.states[s];
                double acc = 0.0;
                for (int k = 0; k < grid.M; ++k) {
                    const auto uk = static_cast<std::size_t>(k);
                    const auto ukp = static_cast<std::size_t>((k + 1) % grid.M);
                    for (int q = 0; q < 5; ++q) {
                        const double a = 0.5 * (1.0 + kGaussNode[q]);
                        const double wq = 0.5 * h * kGaussWeight[q];
                        const double x = (static_cast<double>(k) + a) * h;
                        double worst_flux = 0.0;
                        for (int i = 0; i < n; ++i) {
                            const auto ui = static_cast<std::size_t>(i);
                            const double ui_x = (1.0 - a) * u[ui][uk] + a * u[ui][ukp];
                            double flux = params.D[ui] * ui_x;
                            for (int j = 0; j < n; ++j) {
                                const auto ujj = static_cast<std::size_t>(j);
                                const double uj_x =
                                    (1.0 - a) * u[ujj][uk] + a * u[ujj][ukp];
                                flux += params.A[ui][ujj] * ui_x * uj_x;
                            }
                            worst_flux = std::max(worst_flux, std::abs(flux));
                        }
                        const double lap_h =
                            (phi.value(t, x + h) + phi.value(t, x - h) -
                             2.0 * phi.value(t, x)) /
                            (h * h);
                        acc += wq * worst_flux * std::abs(lap_h - phi.laplacian(t, x));
                    }
                }
                series[s] = acc;
            }
            study.laplacian_consistency.push_back(trapezoid(fine.times, series));
        }
    }

    std::vector<double> hs(levels);
    for (std::size_t m = 0; m < levels; ++m) {
        hs[m] = 1.0 / static_cast<double>(M_list[m]);
    }
    study.weak_residual_slopes.assign(phis.size(), 0.0);
    for (std::size_t p = 0; p < phis.size(); ++p) {
        std::vector<double> res(levels);
        for (std::size_t m = 0; m < levels; ++m) {
            res[m] = study.weak_residual_per_phi[m][p];
        }
        study.weak_residual_slopes[p] = fit_loglog_slope(hs, res);
    }
    study.product_gap_slope = fit_loglog_slope(hs, study.product_gap);
    return study;
}

} // namespace sktk
