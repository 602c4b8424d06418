#include "sktk/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace sktk {

Grid::Grid(int sites) : M(sites) {
    if (sites < 2) {
        throw std::invalid_argument("Grid: need at least 2 sites");
    }
    h = 1.0 / static_cast<double>(M);
}

GridFunction::GridFunction(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.M) {
        throw std::invalid_argument("GridFunction: value count must equal the site count");
    }
}

GridFunction::GridFunction(Grid g, double fill)
    : grid(g), values(static_cast<std::size_t>(g.M), fill) {}

GridFunction forward_diff(const GridFunction& w) {
    const int M = w.grid.M;
    GridFunction out(w.grid);
    for (int k = 0; k < M; ++k) {
        out[k] = (w.at(k + 1) - w[k]) / w.grid.h;
    }
    return out;
}

GridFunction backward_diff(const GridFunction& w) {
    const int M = w.grid.M;
    GridFunction out(w.grid);
    for (int k = 0; k < M; ++k) {
        out[k] = (w[k] - w.at(k - 1)) / w.grid.h;
    }
    return out;
}

GridFunction laplacian(const GridFunction& w) {
    const int M = w.grid.M;
    const double h2 = w.grid.h * w.grid.h;
    GridFunction out(w.grid);
    for (int k = 0; k < M; ++k) {
        out[k] = (w.at(k + 1) + w.at(k - 1) - 2.0 * w[k]) / h2;
    }
    return out;
}

double discrete_norm(const GridFunction& w, double p) {
    if (p < 1.0) {
        throw std::invalid_argument("discrete_norm: p must be >= 1");
    }
    double sum = 0.0;
    for (double v : w.values) {
        sum += std::pow(std::abs(v), p);
    }
    return std::pow(w.grid.h * sum, 1.0 / p);
}

double PiecewiseLinear::operator()(double x) const {
    x -= std::floor(x); // wrap into [0,1)
    const int M = grid.M;
    double scaled = x * M;
    int k = static_cast<int>(scaled);
    if (k >= M) {
        k = M - 1; // guard against x*M rounding up to M
    }
    const double alpha = scaled - k;
    const double a = values[static_cast<std::size_t>(k)];
    const double b = values[static_cast<std::size_t>((k + 1) % M)];
    return (1.0 - alpha) * a + alpha * b;
}

PiecewiseLinear interpolate(const GridFunction& w) {
    return PiecewiseLinear{w.grid, w.values};
}

double cell_abs_pow_integral(double a, double b, double p) {
    const double A = std::abs(a);
    const double B = std::abs(b);
    if (A == 0.0 && B == 0.0) {
        return 0.0;
    }
    const bool opposite = (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0);
    if (opposite) {
        // Zero crossing at s* = A/(A+B); each side is linear down to zero.
        const double s = A / (A + B);
        return (s * std::pow(A, p) + (1.0 - s) * std::pow(B, p)) / (p + 1.0);
    }
    const double hi = std::max(A, B);
    const double lo = std::min(A, B);
    if (hi - lo < 1e-10 * hi) {
        // Near-equal endpoints: second-order series around the midpoint.
        const double m = 0.5 * (A + B);
        const double d = B - A;
        const double rel = d / m;
        return std::pow(m, p) * (1.0 + p * (p - 1.0) * rel * rel / 24.0);
    }
    return (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo));
}

double interpolant_lp_norm(const GridFunction& w, double p) {
    if (p < 1.0) {
        throw std::invalid_argument("interpolant_lp_norm: p must be >= 1");
    }
    const int M = w.grid.M;
    double sum = 0.0;
    for (int k = 0; k < M; ++k) {
        sum += cell_abs_pow_integral(w[k], w.at(k + 1), p);
    }
    return std::pow(w.grid.h * sum, 1.0 / p);
}

double interpolant_gradient_norm(const GridFunction& w, double p) {
    if (p < 1.0) {
        throw std::invalid_argument("interpolant_gradient_norm: p must be >= 1");
    }
    return discrete_norm(forward_diff(w), p);
}

} // namespace sktk
