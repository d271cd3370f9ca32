#pragma once

#include "gfpc/pole_design.hpp"
#include "gfpc/powerflow.hpp"

#include <string>
#include <vector>

namespace gfpc {

// ============================================================================
// Closed-loop time-domain simulation and step-response metrics
// ============================================================================

struct SimConfig {
    double t_end        = 8.0;   // s
    double dt           = 1e-4;  // s, fixed RK4 step; must be <= 5e-3
    int    record_every = 1;     // record one sample per this many steps

    void validate() const;  // throws ValidationError
};

enum class SetpointTarget { PSet, QSet, OmegaSet, VSet };

SetpointTarget parse_setpoint_target(const std::string& name);
std::string to_string(SetpointTarget target);

/// A step change of one setpoint, applied between integration steps at the
/// nearest grid point.
struct SetpointEvent {
    double         time = 0.0;  // s, in [0, t_end]
    SetpointTarget target = SetpointTarget::PSet;
    double         value = 0.0;  // p.u.
};

struct TrajectoryRecord {
    double t     = 0.0;
    double delta = 0.0;  // power angle, rad (z for linear runs, see below)
    double omega = 0.0;  // converter frequency reference omega_u, p.u.
    double v     = 0.0;  // converter voltage reference E_u, p.u.
    double p     = 0.0;
    double q     = 0.0;
    double e1    = 0.0;  // frequency-loop output error
    double e2    = 0.0;  // voltage-loop output error
};

/// Uniformly sampled simulation output; immutable once returned.
struct Trajectory {
    std::vector<TrajectoryRecord> records;
};

struct StepMetrics {
    double overshoot     = 0.0;  // percent of step magnitude
    double settling_time = 0.0;  // s from the event
    double peak_time     = 0.0;  // s from the event
    double final_value   = 0.0;  // p.u.
};

/// Integrates the 3-state closed loop (delta, zeta1, zeta2), where the zetas
/// are the two controller integrators:
///   omega_u = zeta1 - k13*delta        E_u = zeta2 - k23*delta
///   zeta1'  = -k11*e1 - k12*e2         zeta2' = -k21*e1 - k22*e2
///   delta'  = omega_b*(omega_u - omega_g)
///   e1 = (omega_u + d_p*p) - (omega_set + d_p*p_set)
///   e2 = (E_u + d_q*q) - (v_set + d_q*q_set)
/// with (p, q) algebraic from the line power flow at (delta, E_u). The
/// controller runs in absolute quantities; the integrators start at the
/// pre-event equilibrium (omega_u = omega_g, E_u = v0, delta = delta0), so a
/// run without events holds every signal constant.
///
/// Classical fixed-step RK4. Throws NumericalBlowupError when any state
/// exceeds 1e6 in magnitude or becomes non-finite; propagates
/// No/DegenerateEquilibrium errors from the initialization.
Trajectory simulate_nonlinear(const SystemParams& params, const FeedbackGain& gain,
                              const std::vector<SetpointEvent>& events, const SimConfig& cfg);

/// Integrates x' = (a - b*gain)*x with the same RK4 stepper. The state is
/// x = (e1, e2, z) with z the scaled angle rate; z is recorded in the delta
/// column slot and the omega/v/p/q columns stay zero.
Trajectory simulate_linear(const PlantMatrices& plant, const Mat23& gain, const Vec3& x0,
                           const SimConfig& cfg);

enum class Signal { Delta, Omega, V, P, Q, E1, E2 };

Signal parse_signal(const std::string& name);

/// Step-response metrics of one recorded signal:
///   final_value:   mean of the trailing 5% of samples
///   overshoot:     max(0, peak deviation beyond final in the step direction)
///                  as a percentage of |final - initial|
///   settling_time: last instant the signal is outside final +- band*|step|,
///                  measured from event_time
///   peak_time:     instant of the peak deviation, measured from event_time
/// Throws NotSettledError when the signal is still outside the band at the
/// end of the trajectory.
StepMetrics step_metrics(const Trajectory& traj, Signal signal, double event_time,
                         double band = 0.02);

}  // namespace gfpc
