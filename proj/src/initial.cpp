#include "sktk/initial.hpp"

#include <cmath>
#include <stdexcept>

namespace sktk {

InitialData constant_initial(std::vector<double> values) {
    return [values = std::move(values)](int species, double) {
        return values[static_cast<std::size_t>(species)];
    };
}

InitialData fourier_initial(std::vector<double> base, std::vector<std::vector<double>> amplitude,
                            std::vector<std::vector<int>> mode,
                            std::vector<std::vector<double>> phase) {
    if (amplitude.size() != base.size() || mode.size() != base.size() ||
        phase.size() != base.size()) {
        throw std::invalid_argument("fourier_initial: per-species lists must match base length");
    }
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (amplitude[i].size() != mode[i].size() || amplitude[i].size() != phase[i].size()) {
            throw std::invalid_argument("fourier_initial: amplitude/mode/phase lengths differ");
        }
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    return [base = std::move(base), amplitude = std::move(amplitude), mode = std::move(mode),
            phase = std::move(phase)](int species, double x) {
        const auto i = static_cast<std::size_t>(species);
        double v = base[i];
        for (std::size_t ell = 0; ell < amplitude[i].size(); ++ell) {
            v += amplitude[i][ell] * std::sin(two_pi * mode[i][ell] * x + phase[i][ell]);
        }
        return v;
    };
}

Matrix sample_initial(const InitialData& u0, int n, const Grid& grid) {
    Matrix out(static_cast<std::size_t>(n),
               std::vector<double>(static_cast<std::size_t>(grid.M), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < grid.M; ++k) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = u0(i, grid.site(k));
        }
    }
    return out;
}

bool strictly_positive_on_grid(const InitialData& u0, int n, const Grid& grid) {
    const int samples = 16 * grid.M;
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < samples; ++s) {
            const double x = static_cast<double>(s) / samples;
            if (!(u0(i, x) > 0.0)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace sktk
