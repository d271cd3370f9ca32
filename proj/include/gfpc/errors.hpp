#pragma once

#include <stdexcept>
#include <string>

namespace gfpc {

/// A numeric field violates a documented model constraint. The message names
/// the offending field and the constraint.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The steady-state solver failed to converge, or converged outside the
/// stable branch of the power-angle curve.
class NoEquilibriumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero P-f droop with omega_set != omega_g: no synchronized equilibrium exists.
class DegenerateDroopError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The extended plant is not completely controllable; pole placement refused.
class UncontrollableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every parameter-matrix candidate produced a singular (or unusable)
/// similarity transform. The message carries diagnostics of the best attempt.
class PlacementSingularError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulated state left the admissible range or became non-finite.
class NumericalBlowupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The analyzed signal is still outside the settling band at the end of the
/// trajectory.
class NotSettledError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration text is not valid JSON; carries the 1-based line/column of
/// the first offending byte.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column)
        : std::runtime_error(message), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace gfpc
