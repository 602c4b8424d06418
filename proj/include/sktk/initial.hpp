#ifndef SKTK_INITIAL_HPP
#define SKTK_INITIAL_HPP

#include <functional>
#include <vector>

#include "sktk/grid.hpp"
#include "sktk/model.hpp"

namespace sktk {

/// Closed-form initial data: species index and position -> value.
using InitialData = std::function<double(int species, double x)>;

/// Constant profiles per species.
InitialData constant_initial(std::vector<double> values);

/// base_i + sum_ell amplitude[i][ell] * sin(2 pi mode[i][ell] x + phase[i][ell]).
InitialData fourier_initial(std::vector<double> base, std::vector<std::vector<double>> amplitude,
                            std::vector<std::vector<int>> mode,
                            std::vector<std::vector<double>> phase);

/// Samples the closed form at the grid nodes.
Matrix sample_initial(const InitialData& u0, int n, const Grid& grid);

/// Strict positivity probe on a dense set of points (16 M samples).
bool strictly_positive_on_grid(const InitialData& u0, int n, const Grid& grid);

} // namespace sktk

#endif // SKTK_INITIAL_HPP
