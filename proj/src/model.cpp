#include "sktk/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sktk/errors.hpp"

namespace sktk {

namespace {

void check_square(const Matrix& m, std::size_t n, const char* name) {
    if (m.size() != n) {
        throw std::invalid_argument(std::string(name) + ": row count does not match species count");
    }
    for (const auto& row : m) {
        if (row.size() != n) {
            throw std::invalid_argument(std::string(name) + ": matrix is not square");
        }
    }
}

} // namespace

ModelParams::ModelParams(std::vector<double> D_in, Matrix A_in, std::vector<double> pi_in)
    : n(static_cast<int>(D_in.size())), D(std::move(D_in)), A(std::move(A_in)), pi(std::move(pi_in)) {
    if (n < 1) {
        throw std::invalid_argument("ModelParams: need at least one species");
    }
    if (pi.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("ModelParams: pi length does not match species count");
    }
    check_square(A, static_cast<std::size_t>(n), "ModelParams A");
}

MicroParams::MicroParams(std::vector<double> D_in, Matrix Dij_in, std::vector<double> pi_in)
    : n(static_cast<int>(D_in.size())), D(std::move(D_in)), Dij(std::move(Dij_in)), pi(std::move(pi_in)) {
    if (n < 1) {
        throw std::invalid_argument("MicroParams: need at least one species");
    }
    if (pi.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("MicroParams: pi length does not match species count");
    }
    check_square(Dij, static_cast<std::size_t>(n), "MicroParams Dij");
    for (int i = 0; i < n; ++i) {
        if (D[static_cast<std::size_t>(i)] < 0.0) {
            throw std::invalid_argument("MicroParams: D_i must be nonnegative");
        }
        if (!(pi[static_cast<std::size_t>(i)] > 0.0)) {
            throw std::invalid_argument("MicroParams: pi_i must be strictly positive");
        }
        for (int j = 0; j < n; ++j) {
            if (Dij[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] < 0.0) {
                throw std::invalid_argument("MicroParams: D_ij must be nonnegative");
            }
        }
    }
    // Store an exactly symmetric matrix.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            auto& a = Dij[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            auto& b = Dij[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            const double s = 0.5 * (a + b);
            a = s;
            b = s;
        }
    }
}

ValidationReport validate(const ModelParams& params, double tol_db) {
    ValidationReport report;
    const int n = params.n;
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (params.D[ui] < 0.0) {
            os.str("");
            os << "D_" << i + 1 << " = " << params.D[ui] << " is negative";
            report.violations.push_back(os.str());
        }
        if (!(params.pi[ui] > 0.0)) {
            os.str("");
            os << "pi_" << i + 1 << " = " << params.pi[ui] << " is not strictly positive";
            report.violations.push_back(os.str());
        }
        if (!(params.A[ui][ui] > 0.0)) {
            os.str("");
            os << "A_" << i + 1 << i + 1 << " = " << params.A[ui][ui]
               << " violates strict positivity of self-diffusion";
            report.violations.push_back(os.str());
        }
        for (int j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (params.A[ui][uj] < 0.0) {
                os.str("");
                os << "A_" << i + 1 << j + 1 << " = " << params.A[ui][uj] << " is negative";
                report.violations.push_back(os.str());
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            const double lhs = params.pi[ui] * params.A[ui][uj];
            const double rhs = params.pi[uj] * params.A[uj][ui];
            if (std::abs(lhs - rhs) > tol_db * std::max(1.0, std::abs(lhs))) {
                os.str("");
                os << "detailed balance violated for (i,j)=(" << i + 1 << "," << j + 1
                   << "): pi_i A_ij = " << lhs << " but pi_j A_ji = " << rhs;
                report.violations.push_back(os.str());
            }
        }
    }
    return report;
}

ModelParams micro_to_macro(const MicroParams& micro) {
    const int n = micro.n;
    Matrix A(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                micro.Dij[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                micro.pi[static_cast<std::size_t>(j)];
        }
    }
    return ModelParams(micro.D, std::move(A), micro.pi);
}

MicroParams macro_to_micro(const ModelParams& params, double tol_db) {
    const int n = params.n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double lhs = params.pi[static_cast<std::size_t>(i)] * params.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const double rhs = params.pi[static_cast<std::size_t>(j)] * params.A[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            if (std::abs(lhs - rhs) > tol_db * std::max(1.0, std::abs(lhs))) {
                std::ostringstream os;
                os << "macro_to_micro: pi_i A_ij = " << lhs << " differs from pi_j A_ji = " << rhs
                   << " for (i,j)=(" << i + 1 << "," << j + 1 << ")";
                throw DetailedBalanceViolation(os.str());
            }
        }
    }
    Matrix Dij(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Dij[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                params.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] /
                params.pi[static_cast<std::size_t>(j)];
        }
    }
    return MicroParams(params.D, std::move(Dij), params.pi);
}

std::vector<double> normalized_weights(const std::vector<double>& pi) {
    double total = 0.0;
    for (double p : pi) {
        if (!(p > 0.0)) {
            throw std::invalid_argument("normalized_weights: pi_i must be strictly positive");
        }
        total += p;
    }
    std::vector<double> out(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) {
        out[i] = pi[i] / total;
    }
    return out;
}

} // namespace sktk
