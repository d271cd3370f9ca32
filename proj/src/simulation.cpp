#include "gfpc/simulation.hpp"

#include "gfpc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace gfpc {

namespace {

constexpr double kBlowupLimit = 1e6;

void check_finite(const Vec3& state, double t) {
    if (!state.allFinite() || state.cwiseAbs().maxCoeff() > kBlowupLimit) {
        std::ostringstream oss;
        oss << "simulation: state left the admissible range at t = " << t
            << " (|state| > 1e6 or non-finite) - closed loop is unstable";
        throw NumericalBlowupError(oss.str());
    }
}

std::map<long, std::vector<SetpointEvent>> event_schedule(const std::vector<SetpointEvent>& events,
                                                          const SimConfig& cfg) {
    std::map<long, std::vector<SetpointEvent>> schedule;
    for (const SetpointEvent& ev : events) {
        if (!(ev.time >= 0.0 && ev.time <= cfg.t_end)) {
            throw ValidationError("event.time: must lie in [0, t_end]");
        }
        schedule[std::lround(ev.time / cfg.dt)].push_back(ev);
    }
    return schedule;
}

void apply_event(SystemParams& params, const SetpointEvent& ev) {
    switch (ev.target) {
        case SetpointTarget::PSet: params.p_set = ev.value; break;
        case SetpointTarget::QSet: params.q_set = ev.value; break;
        case SetpointTarget::OmegaSet: params.omega_set = ev.value; break;
        case SetpointTarget::VSet: params.v_set = ev.value; break;
    }
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0 && dt <= t_end)) {
        throw ValidationError("sim.dt: must satisfy 0 < dt <= t_end");
    }
    if (!(dt <= 5e-3)) {
        throw ValidationError("sim.dt: must be <= 5e-3 to resolve the power-loop timescale");
    }
    if (record_every < 1) {
        throw ValidationError("sim.record_every: must be >= 1");
    }
}

SetpointTarget parse_setpoint_target(const std::string& name) {
    if (name == "p_set") return SetpointTarget::PSet;
    if (name == "q_set") return SetpointTarget::QSet;
    if (name == "omega_set") return SetpointTarget::OmegaSet;
    if (name == "v_set") return SetpointTarget::VSet;
    throw ValidationError("event.target: unknown setpoint '" + name +
                          "' (expected p_set, q_set, omega_set or v_set)");
}

std::string to_string(SetpointTarget target) {
    switch (target) {
        case SetpointTarget::PSet: return "p_set";
        case SetpointTarget::QSet: return "q_set";
        case SetpointTarget::OmegaSet: return "omega_set";
        case SetpointTarget::VSet: return "v_set";
    }
    return "?";
}

Trajectory simulate_nonlinear(const SystemParams& params, const FeedbackGain& gain,
                              const std::vector<SetpointEvent>& events, const SimConfig& cfg) {
    cfg.validate();
    params.validate();

    SystemParams current = params;
    const auto schedule = event_schedule(events, cfg);

    const double k11 = gain.k(0, 0), k12 = gain.k(0, 1), k13 = gain.k(0, 2);
    const double k21 = gain.k(1, 0), k22 = gain.k(1, 1), k23 = gain.k(1, 2);

    // Pre-event equilibrium: integrators offset so that omega_u = omega_g and
    // E_u = v0 at delta = delta0. The constant parts of the -k13*delta /
    // -k23*delta feedback are absorbed here.
    const OperatingPoint op = solve_operating_point(current);
    Vec3 state(op.delta0, current.omega_g + k13 * op.delta0, op.v0 + k23 * op.delta0);

    struct Outputs {
        double omega_u, e_u, p, q, e1, e2;
    };
    auto outputs = [&](const Vec3& x) -> Outputs {
        const double omega_u = x(1) - k13 * x(0);
        const double e_u = x(2) - k23 * x(0);
        const PowerFlow pf = compute_power(current, x(0), e_u);
        const double e1 = (omega_u + current.d_p * pf.p) - (current.omega_set + current.d_p * current.p_set);
        const double e2 = (e_u + current.d_q * pf.q) - (current.v_set + current.d_q * current.q_set);
        return {omega_u, e_u, pf.p, pf.q, e1, e2};
    };
    auto deriv = [&](const Vec3& x) -> Vec3 {
        const Outputs o = outputs(x);
        return Vec3(current.omega_b * (o.omega_u - current.omega_g),
                    -k11 * o.e1 - k12 * o.e2,
                    -k21 * o.e1 - k22 * o.e2);
    };

    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    Trajectory traj;
    traj.records.reserve(static_cast<size_t>(n_steps / cfg.record_every) + 2);

    for (long i = 0; i <= n_steps; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        if (auto it = schedule.find(i); it != schedule.end()) {
            for (const SetpointEvent& ev : it->second) apply_event(current, ev);
        }
        check_finite(state, t);
        if (i % cfg.record_every == 0) {
            const Outputs o = outputs(state);
            traj.records.push_back({t, state(0), o.omega_u, o.e_u, o.p, o.q, o.e1, o.e2});
        }
        if (i == n_steps) break;

        const Vec3 c1 = deriv(state);
        const Vec3 c2 = deriv(state + 0.5 * cfg.dt * c1);
        const Vec3 c3 = deriv(state + 0.5 * cfg.dt * c2);
        const Vec3 c4 = deriv(state + cfg.dt * c3);
        state += (cfg.dt / 6.0) * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
    }
    return traj;
}

Trajectory simulate_linear(const PlantMatrices& plant, const Mat23& gain, const Vec3& x0,
                           const SimConfig& cfg) {
    cfg.validate();
    const Mat3 closed = plant.a - plant.b * gain;

    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    Trajectory traj;
    traj.records.reserve(static_cast<size_t>(n_steps / cfg.record_every) + 2);

    Vec3 state = x0;
    for (long i = 0; i <= n_steps; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        check_finite(state, t);
        if (i % cfg.record_every == 0) {
            TrajectoryRecord rec;
            rec.t = t;
            rec.e1 = state(0);
            rec.e2 = state(1);
            rec.delta = state(2);  // z in the delta slot
            traj.records.push_back(rec);
        }
        if (i == n_steps) break;

        const Vec3 c1 = closed * state;
        const Vec3 c2 = closed * (state + 0.5 * cfg.dt * c1);
        const Vec3 c3 = closed * (state + 0.5 * cfg.dt * c2);
        const Vec3 c4 = closed * (state + cfg.dt * c3);
        state += (cfg.dt / 6.0) * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
    }
    return traj;
}

Signal parse_signal(const std::string& name) {
    if (name == "delta") return Signal::Delta;
    if (name == "omega") return Signal::Omega;
    if (name == "v") return Signal::V;
    if (name == "p") return Signal::P;
    if (name == "q") return Signal::Q;
    if (name == "e1") return Signal::E1;
    if (name == "e2") return Signal::E2;
    throw ValidationError("signal: unknown name '" + name + "'");
}

namespace {

double select(const TrajectoryRecord& rec, Signal signal) {
    switch (signal) {
        case Signal::Delta: return rec.delta;
        case Signal::Omega: return rec.omega;
        case Signal::V: return rec.v;
        case Signal::P: return rec.p;
        case Signal::Q: return rec.q;
        case Signal::E1: return rec.e1;
        case Signal::E2: return rec.e2;
    }
    return 0.0;
}

}  // namespace

StepMetrics step_metrics(const Trajectory& traj, Signal signal, double event_time, double band) {
    const size_t n = traj.records.size();
    if (n < 2) {
        throw ValidationError("step_metrics: trajectory needs at least two samples");
    }
    if (!(band > 0.0)) {
        throw ValidationError("step_metrics: band must be > 0");
    }
    if (event_time > traj.records.back().t) {
        throw ValidationError("step_metrics: trajectory does not extend to the event time");
    }

    // First sample at or after the event (events snap to the sample grid).
    size_t i0 = 0;
    while (i0 + 1 < n && traj.records[i0].t < event_time - 1e-12) ++i0;

    const size_t tail = std::max<size_t>(1, static_cast<size_t>(std::ceil(0.05 * n)));
    double final_value = 0.0;
    for (size_t i = n - tail; i < n; ++i) final_value += select(traj.records[i], signal);
    final_value /= static_cast<double>(tail);

    const double initial = select(traj.records[i0], signal);
    const double step = final_value - initial;

    StepMetrics m;
    m.final_value = final_value;
    if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(final_value))) {
        // No detectable step; a flat signal settles immediately.
        return m;
    }

    const double direction = (step > 0.0) ? 1.0 : -1.0;
    double peak_dev = -std::numeric_limits<double>::infinity();
    size_t peak_idx = i0;
    size_t last_outside = n;  // sentinel: never outside
    for (size_t i = i0; i < n; ++i) {
        const double y = select(traj.records[i], signal);
        const double dev = (y - final_value) * direction;
        if (dev > peak_dev) {
            peak_dev = dev;
            peak_idx = i;
        }
        if (std::abs(y - final_value) > band * std::abs(step)) {
            last_outside = i;
        }
    }

    m.overshoot = std::max(0.0, peak_dev / std::abs(step)) * 100.0;
    m.peak_time = traj.records[peak_idx].t - event_time;
    if (last_outside == n) {
        m.settling_time = 0.0;
    } else if (last_outside == n - 1) {
        std::ostringstream oss;
        oss << "step_metrics: signal is outside the " << band * 100.0
            << "% band at the end of the trajectory";
        throw NotSettledError(oss.str());
    } else {
        m.settling_time = traj.records[last_outside + 1].t - event_time;
    }
    return m;
}

}  // namespace gfpc
