#include "gfpc/powerflow.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace gfpc {

namespace {

constexpr double kResidualTol  = 1e-10;
constexpr int    kMaxNewton    = 50;

// Partial derivatives of (p, q) w.r.t. (delta, v) at an arbitrary point.
// Shared by linearize() and the Newton Jacobian; no operating-point
// invariants are enforced here because Newton iterates may wander.
LinearizedGains sensitivities(const SystemParams& sp, double delta, double v) {
    const double z2 = sp.r_g * sp.r_g + sp.x_g * sp.x_g;
    const double s = std::sin(delta);
    const double c = std::cos(delta);
    LinearizedGains g;
    g.k_pdelta = v * sp.v_g * (sp.r_g * s + sp.x_g * c) / z2;
    g.k_pv     = (2.0 * v * sp.r_g + sp.v_g * (sp.x_g * s - sp.r_g * c)) / z2;
    g.k_qdelta = v * sp.v_g * (sp.x_g * s - sp.r_g * c) / z2;
    g.k_qv     = (2.0 * v * sp.x_g - sp.v_g * (sp.r_g * s + sp.x_g * c)) / z2;
    return g;
}

}  // namespace

void SystemParams::validate() const {
    if (!(r_g * r_g + x_g * x_g > 0.0)) {
        throw ValidationError("system.r_g/x_g: line impedance must be nonzero");
    }
    if (!(omega_b > 0.0)) {
        throw ValidationError("system.omega_b: must be > 0");
    }
    if (!(v_g > 0.0)) {
        throw ValidationError("system.v_g: must be > 0");
    }
    if (!(d_p >= 0.0)) {
        throw ValidationError("system.d_p: must be >= 0");
    }
    if (!(d_q >= 0.0)) {
        throw ValidationError("system.d_q: must be >= 0");
    }
}

PowerFlow compute_power(const SystemParams& params, double delta, double v) {
    const double z2 = params.r_g * params.r_g + params.x_g * params.x_g;
    if (!(z2 > 0.0)) {
        throw std::domain_error("compute_power: zero line impedance");
    }
    if (!(v > 0.0)) {
        throw std::domain_error("compute_power: converter voltage must be > 0");
    }
    const double s = std::sin(delta);
    const double c = std::cos(delta);
    PowerFlow out;
    out.p = (v * v * params.r_g + v * params.v_g * (params.x_g * s - params.r_g * c)) / z2;
    out.q = (v * v * params.x_g - v * params.v_g * (params.r_g * s + params.x_g * c)) / z2;
    return out;
}

OperatingPoint solve_operating_point(const SystemParams& params) {
    params.validate();

    double p_target;
    if (params.d_p > 0.0) {
        p_target = params.p_set + (params.omega_set - params.omega_g) / params.d_p;
    } else {
        if (params.omega_set != params.omega_g) {
            throw DegenerateDroopError(
                "solve_operating_point: d_p = 0 with omega_set != omega_g leaves no "
                "grid-synchronized equilibrium");
        }
        p_target = params.p_set;  // continuous d_p -> 0 limit
    }

    double delta = 0.0;
    double v     = params.v_set;

    auto residual = [&](double d, double vv) {
        const PowerFlow pf = compute_power(params, d, std::max(vv, 1e-12));
        return Eigen::Vector2d(pf.p - p_target,
                               vv - params.v_set + params.d_q * (pf.q - params.q_set));
    };

    double residual_norm = residual(delta, v).norm();
    for (int iter = 0; iter < kMaxNewton && residual_norm > kResidualTol; ++iter) {
        const LinearizedGains g = sensitivities(params, delta, std::max(v, 1e-12));
        Eigen::Matrix2d jac;
        jac << g.k_pdelta, g.k_pv,
               params.d_q * g.k_qdelta, 1.0 + params.d_q * g.k_qv;
        if (std::abs(jac.determinant()) < 1e-14) {
            throw NoEquilibriumError("solve_operating_point: singular Jacobian at delta=" +
                                     std::to_string(delta) + ", v=" + std::to_string(v));
        }
        const Eigen::Vector2d step = jac.partialPivLu().solve(residual(delta, v));
        delta -= step(0);
        v -= step(1);
        if (!std::isfinite(delta) || !std::isfinite(v)) {
            throw NoEquilibriumError("solve_operating_point: iteration diverged");
        }
        residual_norm = residual(delta, v).norm();
    }

    if (residual_norm > kResidualTol) {
        std::ostringstream oss;
        oss << "solve_operating_point: no convergence within " << kMaxNewton
            << " iterations (residual " << residual_norm << ")";
        throw NoEquilibriumError(oss.str());
    }
    if (!(std::abs(delta) < std::numbers::pi / 2.0)) {
        throw NoEquilibriumError(
            "solve_operating_point: solution lies on the unstable power-angle branch "
            "(|delta| >= pi/2)");
    }
    if (!(v > 0.0)) {
        throw NoEquilibriumError("solve_operating_point: negative voltage solution");
    }
    return OperatingPoint{delta, v};
}

LinearizedGains linearize(const SystemParams& params, const OperatingPoint& op) {
    params.validate();
    if (!(op.v0 > 0.0)) {
        throw ValidationError("operating_point.v0: must be > 0");
    }
    if (!(std::abs(op.delta0) < std::numbers::pi / 2.0)) {
        throw ValidationError("operating_point.delta0: must satisfy |delta0| < pi/2");
    }
    return sensitivities(params, op.delta0, op.v0);
}

}  // namespace gfpc
