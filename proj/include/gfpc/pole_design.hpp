#pragma once

#include "gfpc/statespace.hpp"
#include "gfpc/types.hpp"

namespace gfpc {

// ============================================================================
// Time-domain specifications -> eigenvalue targets -> feedback gain
// ============================================================================

/// Second-order dominant-pair specification plus the far real pole at -a.
struct PerformanceSpec {
    double xi = 0.707;  // damping ratio, in (0, 1)
    double ts = 1.0;    // settling time (2% band), s
    double a  = 20.0;   // magnitude of the real eigenvalue, 1/s

    void validate() const;  // throws ValidationError
};

/// Natural frequency implied by the 2% settling-time rule ts = 4/(xi*omega_n).
double natural_frequency(const PerformanceSpec& spec);

/// True when the real pole is not comfortably faster than the dominant pair
/// (a < 5*xi*omega_n). Advisory only; callers may warn but should not fail.
bool separation_weak(const PerformanceSpec& spec);

/// Three closed-loop eigenvalue targets, closed under conjugation, all with
/// strictly negative real part and none at the origin.
struct EigenvalueTargets {
    EigTriple lambdas{};

    void validate() const;  // throws ValidationError
};

/// 2x3 state-feedback gain together with its placement certificate: the
/// eigenvalues of (a - b*k) recomputed from scratch and their worst relative
/// distance to the requested targets (<= 1e-8 by construction).
struct FeedbackGain {
    Mat23     k = Mat23::Zero();
    EigTriple achieved_eigs{};
    double    max_rel_error = 0.0;
};

/// Percent overshoot of the canonical second-order step response,
/// 100*exp(-pi*xi/sqrt(1-xi^2)). Throws std::domain_error outside (0, 1).
double po_from_damping(double xi);

/// Inverse of po_from_damping. Throws std::domain_error outside (0, 100).
double damping_from_po(double po);

/// omega_n = 4/(xi*ts); targets { -xi*omega_n +- j*omega_n*sqrt(1-xi^2), -a }.
EigenvalueTargets spec_to_targets(const PerformanceSpec& spec);

/// Coefficients (1, c2, c1, c0) of the monic cubic with the target roots.
/// Rejects target sets that are not closed under conjugation.
Vec4 target_polynomial(const EigenvalueTargets& targets);

/// Solves for k such that eig(a - b*k) equals the targets, by eigenstructure
/// assignment: with the targets arranged into the real block-diagonal matrix
/// L (2x2 rotation-scaled block per conjugate pair, scalars for real
/// eigenvalues), a parameter matrix g is chosen, the Sylvester equation
/// a*x - x*L = b*g is solved as a 9x9 linear system, and k = g*x^{-1}.
///
/// The default g = [1 0 0; 0 0 1] drives the conjugate pair through the
/// frequency input and the real eigenvalue through the voltage input, which
/// keeps the two power loops' roles separated in the closed loop. When x is
/// singular (condition number > 1e12) or the placement certificate misses
/// 1e-8, up to 8 alternative g matrices from a fixed list are tried in order,
/// so the result is deterministic for fixed inputs.
///
/// Throws UncontrollableError when rank([b, a*b, a^2*b]) < 3 and
/// PlacementSingularError (with diagnostics) when every candidate fails.
FeedbackGain place_poles(const PlantMatrices& plant, const EigenvalueTargets& targets);

/// Eigenvalues of (a - b*gain) via the characteristic cubic, sorted by
/// (real part, imaginary part) ascending; conjugate-closed for real inputs.
EigTriple closed_loop_eigs(const PlantMatrices& plant, const Mat23& gain);

}  // namespace gfpc
