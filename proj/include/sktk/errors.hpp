#ifndef SKTK_ERRORS_HPP
#define SKTK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sktk {

/// Explicit time stepping gave up (blow-up or pathological data).
class StepFailure : public std::runtime_error {
public:
    explicit StepFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// A state that must be strictly positive has a nonpositive entry.
class NonPositiveState : public std::runtime_error {
public:
    explicit NonPositiveState(const std::string& msg) : std::runtime_error(msg) {}
};

/// A measure that must be strictly positive has a nonpositive entry.
class NonPositiveMeasure : public std::runtime_error {
public:
    explicit NonPositiveMeasure(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested labeled state space exceeds the enumeration cap.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

/// Distribution is not exchangeable within species.
class SymmetryViolation : public std::runtime_error {
public:
    explicit SymmetryViolation(const std::string& msg) : std::runtime_error(msg) {}
};

/// Marginal multi-index out of range.
class BadMultiIndex : public std::runtime_error {
public:
    explicit BadMultiIndex(const std::string& msg) : std::runtime_error(msg) {}
};

/// Coefficients fail the detailed balance condition.
class DetailedBalanceViolation : public std::runtime_error {
public:
    explicit DetailedBalanceViolation(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sktk

#endif // SKTK_ERRORS_HPP
