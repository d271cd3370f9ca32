#include <catch2/catch_amalgamated.hpp>

#include "gfpc/cubic.hpp"
#include "gfpc/errors.hpp"
#include "gfpc/pole_design.hpp"
#include "gfpc/simulation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstring>
#include <numbers>
#include <random>

using namespace gfpc;
using Catch::Approx;

namespace {

SystemParams table1() {
    SystemParams sp;
    sp.omega_b = 100.0 * std::numbers::pi;
    sp.x_g = 0.087;
    sp.r_g = 0.0;
    sp.d_p = 0.01;
    sp.d_q = 0.05;
    return sp;
}

PlantMatrices table1_plant() {
    const SystemParams sp = table1();
    return build_state_space(sp, linearize(sp, solve_operating_point(sp)));
}

void sort_eigs(EigTriple& v) {
    std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
}

// Peak of the unit step response of s^2 + 2*xi*wn*s + wn^2, by RK4. The
// independent oracle for the overshoot formula.
double simulated_overshoot_percent(double xi, double omega_n) {
    double y = 0.0, v = 0.0;
    const double dt = 1e-5;
    double peak = 0.0;
    auto acc = [&](double yy, double vv) {
        return omega_n * omega_n * (1.0 - yy) - 2.0 * xi * omega_n * vv;
    };
    const double t_end = 3.0 * std::numbers::pi / (omega_n * std::sqrt(1.0 - xi * xi));
    for (double t = 0.0; t < t_end; t += dt) {
        const double k1y = v, k1v = acc(y, v);
        const double k2y = v + 0.5 * dt * k1v, k2v = acc(y + 0.5 * dt * k1y, v + 0.5 * dt * k1v);
        const double k3y = v + 0.5 * dt * k2v, k3v = acc(y + 0.5 * dt * k2y, v + 0.5 * dt * k2v);
        const double k4y = v + dt * k3v, k4v = acc(y + dt * k3y, v + dt * k3v);
        y += dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        peak = std::max(peak, y);
    }
    return 100.0 * (peak - 1.0);
}

}  // namespace

TEST_CASE("po_from_damping matches the simulated step-response peak") {
    CHECK(po_from_damping(0.4) == Approx(25.3826721980109).epsilon(1e-12));
    CHECK(po_from_damping(0.707) == Approx(4.32549312039175).epsilon(1e-12));
    CHECK(po_from_damping(0.4) == Approx(simulated_overshoot_percent(0.4, 10.0)).margin(0.01));
    CHECK(po_from_damping(0.707) == Approx(simulated_overshoot_percent(0.707, 5.0)).margin(0.01));
    CHECK(po_from_damping(0.999999) < 1e-10);  // critically damped limit
    CHECK_THROWS_AS(po_from_damping(0.0), std::domain_error);
    CHECK_THROWS_AS(po_from_damping(1.0), std::domain_error);
    CHECK_THROWS_AS(po_from_damping(-0.2), std::domain_error);
}

TEST_CASE("damping_from_po inverts the overshoot map") {
    CHECK(damping_from_po(25.3826721980109) == Approx(0.4).epsilon(1e-12));
    CHECK(damping_from_po(4.32549312039175) == Approx(0.707).epsilon(1e-12));
    for (double po : {1.0, 5.0, 10.0, 20.0, 50.0}) {
        CHECK(po_from_damping(damping_from_po(po)) == Approx(po).epsilon(1e-10));
    }
    CHECK_THROWS_AS(damping_from_po(0.0), std::domain_error);
    CHECK_THROWS_AS(damping_from_po(100.0), std::domain_error);
}

TEST_CASE("spec_to_targets evaluates the settling-time rule") {
    const EigenvalueTargets case1 = spec_to_targets(PerformanceSpec{0.4, 1.0, 20.0});
    CHECK(case1.lambdas[0].real() == Approx(-4.0).epsilon(1e-14));
    CHECK(case1.lambdas[0].imag() == Approx(9.16515138991168).epsilon(1e-12));
    CHECK(case1.lambdas[1] == std::conj(case1.lambdas[0]));
    CHECK(case1.lambdas[2] == Complex(-20.0, 0.0));

    const EigenvalueTargets case4 = spec_to_targets(PerformanceSpec{0.707, 2.0, 20.0});
    CHECK(natural_frequency(PerformanceSpec{0.707, 2.0, 20.0}) ==
          Approx(2.82885431400283).epsilon(1e-12));
    CHECK(case4.lambdas[0].real() == Approx(-2.0).epsilon(1e-14));
    CHECK(case4.lambdas[0].imag() == Approx(2.00060409123155).epsilon(1e-12));

    // near-critical damping degenerates toward a double real pole at -4/ts
    const EigenvalueTargets stiff = spec_to_targets(PerformanceSpec{1.0 - 1e-9, 0.5, 20.0});
    CHECK(stiff.lambdas[0].real() == Approx(-8.0).epsilon(1e-6));
    CHECK(std::abs(stiff.lambdas[0].imag()) < 1e-3);
}

TEST_CASE("spec round trip recovers damping and natural frequency") {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> xi_dist(0.05, 0.95);
    std::uniform_real_distribution<double> ts_dist(0.2, 5.0);
    for (int draw = 0; draw < 100; ++draw) {
        const PerformanceSpec spec{xi_dist(rng), ts_dist(rng), 20.0};
        const EigenvalueTargets targets = spec_to_targets(spec);
        const Complex pair = targets.lambdas[0];
        const double omega_n = std::abs(pair);
        const double xi = -pair.real() / omega_n;
        CHECK(xi == Approx(spec.xi).epsilon(1e-12));
        CHECK(omega_n == Approx(natural_frequency(spec)).epsilon(1e-12));
    }
}

TEST_CASE("separation heuristic flags a slow real pole") {
    CHECK_FALSE(separation_weak(PerformanceSpec{0.4, 1.0, 20.0}));  // 5*xi*wn = 20, not below
    CHECK(separation_weak(PerformanceSpec{0.4, 1.0, 5.0}));
    CHECK_FALSE(separation_weak(PerformanceSpec{0.4, 2.0, 20.0}));  // threshold 10
}

TEST_CASE("PerformanceSpec validation") {
    CHECK_THROWS_AS((PerformanceSpec{1.2, 1.0, 20.0}.validate()), ValidationError);
    CHECK_THROWS_AS((PerformanceSpec{0.4, 0.0, 20.0}.validate()), ValidationError);
    CHECK_THROWS_AS((PerformanceSpec{0.4, 1.0, -3.0}.validate()), ValidationError);
}

TEST_CASE("target_polynomial expands the reference case") {
    const Vec4 poly = target_polynomial(spec_to_targets(PerformanceSpec{0.4, 1.0, 20.0}));
    CHECK(poly(0) == 1.0);
    CHECK(poly(1) == Approx(28.0).epsilon(1e-12));
    CHECK(poly(2) == Approx(260.0).epsilon(1e-12));
    CHECK(poly(3) == Approx(2000.0).epsilon(1e-12));

    EigenvalueTargets repeated;
    repeated.lambdas = {Complex(-1, 0), Complex(-1, 0), Complex(-1, 0)};
    const Vec4 cube = target_polynomial(repeated);
    CHECK(cube(1) == Approx(3.0));
    CHECK(cube(2) == Approx(3.0));
    CHECK(cube(3) == Approx(1.0));
}

TEST_CASE("target_polynomial round-trips through the cubic solver") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> xi_dist(0.1, 0.9);
    std::uniform_real_distribution<double> ts_dist(0.3, 4.0);
    std::uniform_real_distribution<double> a_dist(5.0, 40.0);
    for (int draw = 0; draw < 50; ++draw) {
        const EigenvalueTargets targets =
            spec_to_targets(PerformanceSpec{xi_dist(rng), ts_dist(rng), a_dist(rng)});
        const Vec4 poly = target_polynomial(targets);
        EigTriple roots = cubic_roots(poly(1), poly(2), poly(3));
        sort_eigs(roots);
        EigTriple want = targets.lambdas;
        sort_eigs(want);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(roots[i] - want[i]) <= 1e-10 * std::abs(want[i]));
        }
    }
}

TEST_CASE("target validation rejects malformed sets") {
    EigenvalueTargets not_closed;
    not_closed.lambdas = {Complex(-1, 1), Complex(-1, 1), Complex(-2, 0)};
    CHECK_THROWS_AS(target_polynomial(not_closed), ValidationError);
    CHECK_THROWS_AS(not_closed.validate(), ValidationError);

    EigenvalueTargets unstable;
    unstable.lambdas = {Complex(1, 2), Complex(1, -2), Complex(-2, 0)};
    CHECK_THROWS_AS(unstable.validate(), ValidationError);

    EigenvalueTargets at_origin;
    at_origin.lambdas = {Complex(-1, 2), Complex(-1, -2), Complex(0, 0)};
    CHECK_THROWS_AS(at_origin.validate(), ValidationError);
}

TEST_CASE("place_poles places the four studied cases exactly") {
    const PlantMatrices plant = table1_plant();
    const PerformanceSpec specs[] = {
        {0.4, 1.0, 20.0}, {0.4, 2.0, 20.0}, {0.707, 1.0, 20.0}, {0.707, 2.0, 20.0}};
    for (const PerformanceSpec& spec : specs) {
        const EigenvalueTargets targets = spec_to_targets(spec);
        const FeedbackGain gain = place_poles(plant, targets);
        CHECK(gain.max_rel_error <= 1e-8);

        // independent oracle: the iterative eigensolver on (a - b*k)
        const Mat3 closed = plant.a - plant.b * gain.k;
        const Eigen::EigenSolver<Mat3> solver(closed);
        EigTriple reference = {solver.eigenvalues()(0), solver.eigenvalues()(1),
                               solver.eigenvalues()(2)};
        sort_eigs(reference);
        EigTriple want = targets.lambdas;
        sort_eigs(want);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(reference[i] - want[i]) <= 1e-8 * std::abs(want[i]));
        }

        // coefficient-wise placement certificate
        const Vec4 achieved_poly = char_poly(closed);
        const Vec4 want_poly = target_polynomial(targets);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(achieved_poly(i) - want_poly(i)) <=
                  1e-8 * std::max(1.0, std::abs(want_poly(i))));
        }
    }
}

TEST_CASE("place_poles handles three distinct real targets") {
    EigenvalueTargets targets;
    targets.lambdas = {Complex(-5, 0), Complex(-10, 0), Complex(-20, 0)};
    const FeedbackGain gain = place_poles(table1_plant(), targets);
    CHECK(gain.max_rel_error <= 1e-8);
}

TEST_CASE("published case-1 gains land near the intended eigenvalues") {
    Mat23 published;
    published << 2.7756, -0.0088, 0.0166,
                 0.0367, 12.7007, 0.0161;
    EigTriple eigs = closed_loop_eigs(table1_plant(), published);
    EigTriple want = spec_to_targets(PerformanceSpec{0.4, 1.0, 20.0}).lambdas;
    sort_eigs(want);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(eigs[i] - want[i]) <= 0.15 * std::abs(want[i]));
    }
}

TEST_CASE("re-placing an already placed loop leaves it untouched") {
    const PlantMatrices plant = table1_plant();
    const EigenvalueTargets targets = spec_to_targets(PerformanceSpec{0.4, 1.0, 20.0});
    const FeedbackGain first = place_poles(plant, targets);

    PlantMatrices placed;
    placed.a = plant.a - plant.b * first.k;
    placed.b = plant.b;
    const FeedbackGain second = place_poles(placed, targets);
    CHECK(second.k.norm() < 1e-6);
    CHECK(second.max_rel_error <= 1e-8);
}

TEST_CASE("place_poles refuses an uncontrollable plant") {
    SystemParams sp = table1();
    sp.d_p = 0.0;
    const PlantMatrices plant = build_state_space(sp, linearize(sp, solve_operating_point(sp)));
    CHECK_THROWS_AS(place_poles(plant, spec_to_targets(PerformanceSpec{0.4, 1.0, 20.0})),
                    UncontrollableError);
}

TEST_CASE("repeated real targets exhaust the parameter matrices") {
    EigenvalueTargets repeated;
    repeated.lambdas = {Complex(-3, 0), Complex(-3, 0), Complex(-3, 0)};
    CHECK_THROWS_AS(place_poles(table1_plant(), repeated), PlacementSingularError);
}

TEST_CASE("place_poles is bitwise deterministic") {
    const PlantMatrices plant = table1_plant();
    const EigenvalueTargets targets = spec_to_targets(PerformanceSpec{0.707, 1.0, 20.0});
    const FeedbackGain a = place_poles(plant, targets);
    const FeedbackGain b = place_poles(plant, targets);
    CHECK(std::memcmp(a.k.data(), b.k.data(), sizeof(double) * 6) == 0);
}

TEST_CASE("closed_loop_eigs of the open loop sits at the origin") {
    const EigTriple eigs = closed_loop_eigs(table1_plant(), Mat23::Zero());
    for (const Complex& lam : eigs) {
        CHECK(std::abs(lam) < 1e-9);
    }
}

TEST_CASE("published case-2 gains give a stable loop") {
    Mat23 published;
    published << 0.6939, -0.0022, 0.0105,
                 0.0389, 12.7007, 0.0161;
    for (const Complex& lam : closed_loop_eigs(table1_plant(), published)) {
        CHECK(lam.real() < 0.0);
    }
}

TEST_CASE("closed_loop_eigs is sorted and conjugate-closed on random gains") {
    std::mt19937 rng(246);
    std::uniform_real_distribution<double> entry(-5.0, 5.0);
    const PlantMatrices plant = table1_plant();
    for (int draw = 0; draw < 100; ++draw) {
        Mat23 gain;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 3; ++j) gain(i, j) = entry(rng);
        }
        const EigTriple eigs = closed_loop_eigs(plant, gain);
        CHECK(eigs[0].real() <= eigs[1].real() + 1e-12);
        CHECK(eigs[1].real() <= eigs[2].real() + 1e-12);
        double imag_sum = 0.0;
        for (const Complex& lam : eigs) imag_sum += lam.imag();
        CHECK(std::abs(imag_sum) < 1e-9);
    }
}

TEST_CASE("stable placements decay in per-unit state coordinates") {
    // The raw state z = omega_b * (frequency deviation) is numerically ~300x
    // larger than the error states, so the decay bound is checked in the
    // per-unit norm (e1, e2, z/omega_b).
    const SystemParams sp = table1();
    const PlantMatrices plant = table1_plant();
    const PerformanceSpec specs[] = {
        {0.4, 1.0, 20.0}, {0.4, 2.0, 20.0}, {0.707, 1.0, 20.0}, {0.707, 2.0, 20.0}};
    std::mt19937 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (const PerformanceSpec& spec : specs) {
        const FeedbackGain gain = place_poles(plant, spec_to_targets(spec));
        double slowest = 0.0;
        for (const Complex& lam : gain.achieved_eigs) {
            slowest = std::max(slowest, 1.0 / std::abs(lam.real()));
        }

        std::vector<Vec3> starts = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
        for (int extra = 0; extra < 3; ++extra) {
            Vec3 v(gauss(rng), gauss(rng), gauss(rng));
            starts.push_back(v.normalized());
        }
        for (const Vec3& x0 : starts) {
            SimConfig cfg;
            cfg.t_end = 10.0 * slowest;
            cfg.dt = 1e-3;
            cfg.record_every = 100;
            const Trajectory traj = simulate_linear(plant, gain.k, x0, cfg);
            const TrajectoryRecord& last = traj.records.back();
            const Vec3 scaled_end(last.e1, last.e2, last.delta / sp.omega_b);
            const Vec3 scaled_start(x0(0), x0(1), x0(2) / sp.omega_b);
            CHECK(scaled_end.norm() < 1e-3 * scaled_start.norm());
        }
    }
}
