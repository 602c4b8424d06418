#ifndef SKTK_CONVERGENCE_HPP
#define SKTK_CONVERGENCE_HPP

#include <functional>
#include <string>
#include <vector>

#include "sktk/initial.hpp"
#include "sktk/master.hpp"

namespace sktk {

/// Space-time test function, periodic in x and compactly supported in t
/// strictly inside [0, T). The continuum laplacian is only used for the
/// final-limit consistency report; the weak residual itself uses the
/// discrete laplacian of `value` at the trajectory's own spacing.
struct TestFunction {
    std::string name;
    std::function<double(double t, double x)> value;
    std::function<double(double t, double x)> time_derivative;
    std::function<double(double t, double x)> laplacian;
};

/// psi(t) * trig(2 pi mode x + phase) with psi a smooth bump supported on
/// [0, support_end): psi(t) = exp(1 - 1/(1 - (t/support_end)^2)).
TestFunction bump_test_function(double support_end, int mode, double phase,
                                const std::string& name);

/// Smooth space-only probes for the dual-norm time-derivative monitor.
struct SpaceProfile {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

std::vector<SpaceProfile> default_dual_probes();

/// Weak-form residual of the trajectory for one species:
/// | -int u~(0) phi(0) - int int u~ dphi/dt
///   - int int [D_i u~_i + sum_j A_ij u~_i u~_j] Lap_h phi |.
/// Space integrals are exact per cell against phi sampled with 5-point Gauss;
/// time uses the trapezoid rule over the trajectory samples (>= 200 required).
double weak_residual(const Trajectory& traj, const ModelParams& params, const TestFunction& phi,
                     int species);

/// Max over species.
double weak_residual_max(const Trajectory& traj, const ModelParams& params,
                         const TestFunction& phi);

/// Time-integrated cellwise product-interpolation bound
///   int_0^T (h/6) sum_k (u_i(k) + u_i(k+1)) |u_j(k+1) - u_j(k)| dt,
/// the quantity behind the C_T h estimate for
/// |interp(u_i u_j) - interp(u_i) interp(u_j)|; the alpha(1-alpha) cell
/// polynomial is integrated exactly. Zero whenever u_j is constant in space.
double product_interpolant_gap(const Trajectory& traj, int i, int j);

/// L2([0,T] x T) distance between the interpolants of two trajectories
/// sampled at the same times; the coarse grid must divide the fine one.
double interpolant_l2_distance(const Trajectory& coarse, const Trajectory& fine);

struct RefinementStudy {
    std::vector<int> M_list;
    // Uniform-in-M monitors, one value per M.
    std::vector<double> gradient_integral;      // int_0^T h sum |grad+ u_i|^2, summed over species
    std::vector<double> l4_integral;            // int_0^T |u~_i|_L4^4, summed over species
    std::vector<double> dual_derivative_bound;  // max over probes of int |d/dt int u~ phi| / |phi|_W1inf
    std::vector<double> entropy_sup;            // sup_t H^h
    std::vector<char> entropy_monotone;         // H^h non-increasing along samples
    // Convergence indicators.
    std::vector<std::vector<double>> weak_residual_per_phi; // per M, per phi (max over species)
    std::vector<double> product_gap;                        // per M, max over species pairs
    std::vector<double> successive_l2_diff;                 // per adjacent M pair
    std::vector<double> weak_residual_slopes;               // per phi, log-log in h
    double product_gap_slope = 0.0;
    // int int |D_i u~ + sum A u~u~| |Lap_h phi - Lap phi| on the finest grid,
    // per phi: the remaining consistency term when passing to the continuum
    // laplacian in the weak form.
    std::vector<double> laplacian_consistency;
};

/// Solves the discrete system for every M in M_list (powers of two) from the
/// same closed-form initial data and collects the monitors above.
RefinementStudy refinement_study(const ModelParams& params, const InitialData& u0,
                                 const std::vector<int>& M_list, double T,
                                 const std::vector<TestFunction>& phis, int n_samples = 400,
                                 const StepPolicy& policy = {});

} // namespace sktk

#endif // SKTK_CONVERGENCE_HPP
