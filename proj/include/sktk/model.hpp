#ifndef SKTK_MODEL_HPP
#define SKTK_MODEL_HPP

#include <string>
#include <vector>

namespace sktk {

using Matrix = std::vector<std::vector<double>>;

/// Default relative tolerance for the detailed balance check. The condition
/// pi_i A_ij = pi_j A_ji is exact, but user-entered reals need slack.
inline constexpr double kDetailedBalanceTol = 1e-12;

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

/// Macroscopic coefficients: linear diffusion D_i, cross/self-diffusion A_ij
/// and entropy weights pi_i. Immutable after construction.
struct ModelParams {
    int n = 0;
    std::vector<double> D;
    Matrix A;
    std::vector<double> pi;

    ModelParams() = default;
    /// Checks shapes only; semantic checks live in validate().
    ModelParams(std::vector<double> D_in, Matrix A_in, std::vector<double> pi_in);
};

/// Microscopic rates: single-jump rates D_i and pairwise jump rates D_ij.
/// The constructor symmetrises D_ij, so the stored matrix is exactly symmetric.
struct MicroParams {
    int n = 0;
    std::vector<double> D;
    Matrix Dij;
    std::vector<double> pi;

    MicroParams() = default;
    MicroParams(std::vector<double> D_in, Matrix Dij_in, std::vector<double> pi_in);
};

/// Checks A_ii > 0, A_ij >= 0, D_i >= 0, pi_i > 0 and the detailed balance
/// condition |pi_i A_ij - pi_j A_ji| <= tol_db * max(1, |pi_i A_ij|).
/// Returns one message per violated invariant; an empty report means valid.
ValidationReport validate(const ModelParams& params, double tol_db = kDetailedBalanceTol);

/// A_ij := D_ij * pi_j. The result satisfies detailed balance identically:
/// pi_i A_ij = pi_i D_ij pi_j = pi_j A_ji by symmetry of D_ij.
ModelParams micro_to_macro(const MicroParams& micro);

/// Inverse map D_ij := A_ij / pi_j; throws DetailedBalanceViolation if the
/// input fails the balance condition at tol_db.
MicroParams macro_to_micro(const ModelParams& params, double tol_db = kDetailedBalanceTol);

/// pi scaled to sum to one (particle-count role of the weights).
std::vector<double> normalized_weights(const std::vector<double>& pi);

} // namespace sktk

#endif // SKTK_MODEL_HPP
