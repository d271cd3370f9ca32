#pragma once

#include "gfpc/config.hpp"
#include "gfpc/pole_design.hpp"
#include "gfpc/simulation.hpp"
#include "gfpc/statespace.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gfpc {

// ============================================================================
// Design pipeline, report rendering, CSV export, command entry points
// ============================================================================

/// Everything the six design steps produce for one case. `ok` is false when a
/// step failed; `error` then carries the reason and the later fields are
/// meaningless.
struct CaseResult {
    CaseSpec              spec;
    bool                  ok = false;
    std::string           error;
    OperatingPoint        op;
    LinearizedGains       gains;
    PlantMatrices         plant;
    ControllabilityReport ctrb;
    EigenvalueTargets     targets;
    FeedbackGain          gain;
    bool                  separation_warning = false;
    std::optional<StepMetrics> p_metrics;  // filled by the simulate command
};

struct DesignReport {
    std::vector<CaseResult> cases;

    bool all_ok() const;
};

/// Runs steps 1-6 (operating point, gains, matrices, controllability,
/// targets, gain solve) for every case. Module errors are captured per case,
/// never thrown.
DesignReport run_design(const DesignConfig& config);

/// Deterministic plain-text report; regeneration from the same config is
/// byte-identical.
std::string render_report(const DesignConfig& config, const DesignReport& report);

/// CSV with header t,delta,omega,v,p,q,e1,e2; one row per record, 9
/// significant digits, newline-terminated rows.
std::string trajectory_csv(const Trajectory& traj);

Trajectory parse_trajectory_csv(const std::string& text);

/// Metrics summary table (case, overshoot %, settling s, peak s).
std::string metrics_table(const DesignReport& report);

// Exit-code contract shared by the commands (scriptability in CI):
//   0 success, 1 verification failure, 2 design infeasibility, 3 I/O,
//   64 usage.
inline constexpr int kExitOk           = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInfeasible   = 2;
inline constexpr int kExitIo           = 3;
inline constexpr int kExitUsage        = 64;

/// Writes <out_dir>/design_report.txt and echoes the report to `out`.
/// Returns kExitOk, kExitInfeasible (some case failed; report still emitted
/// for the others) or kExitIo.
int cmd_design(const DesignConfig& config, const std::string& out_dir, std::ostream& out);

/// Designs every case, simulates the configured events, writes one
/// <out_dir>/<case>_trajectory.csv per case plus <out_dir>/metrics.txt, and
/// echoes the metrics table. Exit codes as cmd_design; a numerical blowup
/// marks the case failed.
int cmd_simulate(const DesignConfig& config, const std::string& out_dir, std::ostream& out);

}  // namespace gfpc
