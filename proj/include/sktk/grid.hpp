#ifndef SKTK_GRID_HPP
#define SKTK_GRID_HPP

#include <vector>

namespace sktk {

/// Uniform periodic grid on the torus [0,1): sites x_k = k*h, h = 1/M.
struct Grid {
    int M = 2;
    double h = 0.5;

    Grid() = default;
    explicit Grid(int sites);

    int wrap(int k) const {
        int r = k % M;
        return r < 0 ? r + M : r;
    }
    double site(int k) const { return h * wrap(k); }

    bool operator==(const Grid& other) const { return M == other.M; }
};

/// Per-site real values w(x_k), k = 0..M-1.
struct GridFunction {
    Grid grid;
    std::vector<double> values;

    GridFunction(Grid g, std::vector<double> v);
    explicit GridFunction(Grid g, double fill = 0.0);

    int size() const { return grid.M; }
    double& operator[](int k) { return values[static_cast<std::size_t>(k)]; }
    double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
    /// Wrapped access, valid for any integer index.
    double at(int k) const { return values[static_cast<std::size_t>(grid.wrap(k))]; }
};

/// Forward difference: (w(k+1) - w(k)) / h, periodic.
GridFunction forward_diff(const GridFunction& w);

/// Backward difference: (w(k) - w(k-1)) / h, periodic.
GridFunction backward_diff(const GridFunction& w);

/// Three-point Laplacian: (w(k+1) + w(k-1) - 2 w(k)) / h^2, periodic.
GridFunction laplacian(const GridFunction& w);

/// Discrete norm (h * sum |w|^p)^(1/p); rejects p < 1.
double discrete_norm(const GridFunction& w, double p);

/// Periodic piecewise-linear interpolant through the node values.
struct PiecewiseLinear {
    Grid grid;
    std::vector<double> values;

    /// Evaluates at any x (wrapped into [0,1)); equals values[k] at nodes and
    /// is affine on each cell [x_k, x_{k+1}).
    double operator()(double x) const;
};

PiecewiseLinear interpolate(const GridFunction& w);

/// Exact integral over one unit-parameter cell of |a + (b-a)*s|^p, s in [0,1].
/// Closed form via (A^{p+1}-B^{p+1})/((p+1)(A-B)) with a series fallback when
/// the endpoints nearly coincide, and a split at the zero crossing when the
/// endpoint signs differ.
double cell_abs_pow_integral(double a, double b, double p);

/// Exact L^p norm of the interpolant of w (cell-by-cell closed form).
double interpolant_lp_norm(const GridFunction& w, double p);

/// L^p norm of the interpolant's derivative; equals the discrete norm of the
/// forward difference since the derivative is piecewise constant.
double interpolant_gradient_norm(const GridFunction& w, double p);

} // namespace sktk

#endif // SKTK_GRID_HPP
