#pragma once

#include "gfpc/errors.hpp"

namespace gfpc {

// ============================================================================
// Converter-behind-a-line power-flow model
// ============================================================================
// All electrical quantities are per-unit on the converter base; omega_b alone
// carries physical units (rad/s).

struct SystemParams {
    double omega_b   = 100.0 * 3.14159265358979323846;  // frequency base, rad/s
    double omega_g   = 1.0;                             // grid frequency, p.u.
    double v_g       = 1.0;                             // grid voltage magnitude, p.u.
    double r_g       = 0.0;                             // line resistance, p.u.
    double x_g       = 0.087;                           // line reactance, p.u.
    double d_p       = 0.01;                            // P-f droop coefficient, p.u.
    double d_q       = 0.05;                            // Q-V droop coefficient, p.u.
    double omega_set = 1.0;
    double p_set     = 0.5;
    double q_set     = 0.0;
    double v_set     = 1.0;

    /// Throws ValidationError if any invariant is violated:
    /// r_g^2 + x_g^2 > 0, omega_b > 0, v_g > 0, d_p >= 0, d_q >= 0.
    void validate() const;
};

/// Steady state (delta0, v0) on the stable branch (|delta0| < pi/2, v0 > 0).
struct OperatingPoint {
    double delta0 = 0.0;  // power angle, rad
    double v0     = 1.0;  // capacitor voltage magnitude, p.u.
};

/// The four small-signal sensitivities of (p, q) to (delta, v).
struct LinearizedGains {
    double k_pdelta = 0.0;
    double k_pv     = 0.0;
    double k_qdelta = 0.0;
    double k_qv     = 0.0;
};

struct PowerFlow {
    double p = 0.0;
    double q = 0.0;
};

/// Active/reactive power transferred through the complex line impedance at
/// power angle `delta` and converter voltage magnitude `v`.
/// Throws std::domain_error for zero line impedance or v <= 0.
PowerFlow compute_power(const SystemParams& params, double delta, double v);

/// Solves the droop equilibrium
///   p(delta0, v0) = p_set + (omega_set - omega_g) / d_p
///   v0 = v_set + d_q * (q_set - q(delta0, v0))
/// by 2-D Newton iteration with the analytic Jacobian, starting from
/// (0, v_set). When d_p = 0 the frequency-droop balance degenerates: the
/// solver requires omega_set = omega_g (else DegenerateDroopError) and uses
/// p(delta0, v0) = p_set, the continuous d_p -> 0 limit.
///
/// Throws NoEquilibriumError if the residual norm is not <= 1e-10 within 50
/// iterations or the solution leaves the stable branch.
OperatingPoint solve_operating_point(const SystemParams& params);

/// The four partial derivatives of (p, q) evaluated at the operating point.
LinearizedGains linearize(const SystemParams& params, const OperatingPoint& op);

}  // namespace gfpc
