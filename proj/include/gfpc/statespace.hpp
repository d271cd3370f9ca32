#pragma once

#include "gfpc/powerflow.hpp"
#include "gfpc/types.hpp"

namespace gfpc {

// ============================================================================
// Extended open-loop state space of the power loops
// ============================================================================

/// Open-loop pair for the error/angle states x = (e1, e2, z):
///   a = [0 0 d_p*k_pdelta; 0 0 d_q*k_qdelta; 0 0 0]   (nilpotent, a*a = 0)
///   b = [1 d_p*k_pv; 0 1+d_q*k_qv; omega_b 0]
struct PlantMatrices {
    Mat3  a = Mat3::Zero();
    Mat32 b = Mat32::Zero();
};

struct ControllabilityReport {
    Mat36 p_matrix = Mat36::Zero();  // [b, a*b, a*a*b]; last two columns vanish
    Vec3  singular_values = Vec3::Zero();
    int   rank = 0;
    bool  controllable = false;
};

PlantMatrices build_state_space(const SystemParams& params, const LinearizedGains& gains);

/// Rank test of [b, a*b, a^2*b] via SVD. A singular value counts toward the
/// rank when it is >= rank_tol * (largest singular value); rank_tol must lie
/// in (0, 1). No balancing is applied before the decomposition; tighten
/// rank_tol if the entries span more than the usual ~5 orders of magnitude.
ControllabilityReport controllability(const PlantMatrices& plant, double rank_tol = 1e-9);

}  // namespace gfpc
