#include "gfpc/pole_design.hpp"

#include "gfpc/cubic.hpp"
#include "gfpc/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gfpc {

namespace {

constexpr double kCertTol   = 1e-8;   // placement certificate, relative per eigenvalue
constexpr double kCondLimit = 1e12;   // similarity transform acceptance

// Candidate parameter matrices for the eigenstructure assignment, tried in
// order. Columns 1-2 drive the conjugate-pair block, column 3 the real
// eigenvalue. The first entry routes the pair through the frequency input u1
// and the real pole through the voltage input u2; the rest progressively mix
// the inputs in case the structured choice leaves x singular.
const std::array<Mat23, 9>& parameter_matrices() {
    static const std::array<Mat23, 9> matrices = {
        (Mat23() << 1, 0, 0, 0, 0, 1).finished(),
        (Mat23() << 1, 0, 1, 0, 1, 1).finished(),
        (Mat23() << 1, 0, 0, 0, 1, 1).finished(),
        (Mat23() << 0, 1, 0, 1, 0, 1).finished(),
        (Mat23() << 1, 1, 0, 0, 1, 1).finished(),
        (Mat23() << 1, 0, 1, 0, 1, -1).finished(),
        (Mat23() << 1, -1, 1, 1, 1, 0).finished(),
        (Mat23() << 2, 1, 1, 1, 2, -1).finished(),
        (Mat23() << 0, 1, -1, 1, 1, 1).finished(),
    };
    return matrices;
}

void sort_by_re_im(EigTriple& v) {
    std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

double max_rel_distance(EigTriple achieved, EigTriple targets) {
    sort_by_re_im(achieved);
    sort_by_re_im(targets);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(achieved[i] - targets[i]) / std::abs(targets[i]));
    }
    return worst;
}

// Real block-diagonal form of the target set: one 2x2 rotation-scaled block
// per conjugate pair, scalars for real targets.
Mat3 target_block_matrix(const EigenvalueTargets& targets) {
    double magnitude = 0.0;
    for (const Complex& lam : targets.lambdas) magnitude = std::max(magnitude, std::abs(lam));
    const double imag_tol = 1e-12 * magnitude;

    std::vector<double> reals;
    std::vector<Complex> pair_reps;
    for (const Complex& lam : targets.lambdas) {
        if (std::abs(lam.imag()) <= imag_tol) {
            reals.push_back(lam.real());
        } else if (lam.imag() > 0.0) {
            pair_reps.push_back(lam);
        }
    }

    Mat3 block = Mat3::Zero();
    if (pair_reps.size() == 1 && reals.size() == 1) {
        const double sigma = pair_reps[0].real();
        const double omega_d = pair_reps[0].imag();
        block << sigma, omega_d, 0.0,
                 -omega_d, sigma, 0.0,
                 0.0, 0.0, reals[0];
    } else {
        // validate() guarantees conjugate closure, so this is three reals.
        block.diagonal() << reals[0], reals[1], reals[2];
    }
    return block;
}

}  // namespace

void PerformanceSpec::validate() const {
    if (!(xi > 0.0 && xi < 1.0)) {
        throw ValidationError("xi must be in (0,1)");
    }
    if (!(ts > 0.0)) {
        throw ValidationError("ts: must be > 0");
    }
    if (!(a > 0.0)) {
        throw ValidationError("a: must be > 0");
    }
}

double natural_frequency(const PerformanceSpec& spec) {
    spec.validate();
    return 4.0 / (spec.xi * spec.ts);
}

bool separation_weak(const PerformanceSpec& spec) {
    return spec.a < 5.0 * spec.xi * natural_frequency(spec);
}

void EigenvalueTargets::validate() const {
    double magnitude = 0.0;
    for (const Complex& lam : lambdas) {
        if (!std::isfinite(lam.real()) || !std::isfinite(lam.imag())) {
            throw ValidationError("targets: entries must be finite");
        }
        magnitude = std::max(magnitude, std::abs(lam));
    }
    for (const Complex& lam : lambdas) {
        if (!(lam.real() < 0.0)) {
            throw ValidationError("targets: real parts must be strictly negative");
        }
        if (std::abs(lam) <= 1e-12 * magnitude) {
            throw ValidationError("targets: the origin is excluded (open loop has eig(a) = {0,0,0})");
        }
    }
    // Conjugate closure: every target's conjugate must appear in the set.
    for (const Complex& lam : lambdas) {
        bool matched = false;
        for (const Complex& other : lambdas) {
            if (std::abs(other - std::conj(lam)) <= 1e-9 * magnitude) {
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw ValidationError("targets: set must be closed under complex conjugation");
        }
    }
}

double po_from_damping(double xi) {
    if (!(xi > 0.0 && xi < 1.0)) {
        throw std::domain_error("po_from_damping: xi must be in (0,1)");
    }
    return 100.0 * std::exp(-std::numbers::pi * xi / std::sqrt(1.0 - xi * xi));
}

double damping_from_po(double po) {
    if (!(po > 0.0 && po < 100.0)) {
        throw std::domain_error("damping_from_po: po must be in (0,100)");
    }
    const double l = std::log(po / 100.0);
    return -l / std::sqrt(std::numbers::pi * std::numbers::pi + l * l);
}

EigenvalueTargets spec_to_targets(const PerformanceSpec& spec) {
    spec.validate();
    const double omega_n = natural_frequency(spec);
    const double sigma = -spec.xi * omega_n;
    const double omega_d = omega_n * std::sqrt(1.0 - spec.xi * spec.xi);
    EigenvalueTargets targets;
    targets.lambdas = {Complex(sigma, omega_d), Complex(sigma, -omega_d), Complex(-spec.a, 0.0)};
    return targets;
}

Vec4 target_polynomial(const EigenvalueTargets& targets) {
    targets.validate();
    const Complex l0 = targets.lambdas[0];
    const Complex l1 = targets.lambdas[1];
    const Complex l2 = targets.lambdas[2];
    const Complex c2 = -(l0 + l1 + l2);
    const Complex c1 = l0 * l1 + l0 * l2 + l1 * l2;
    const Complex c0 = -(l0 * l1 * l2);
    for (const Complex& c : {c2, c1, c0}) {
        if (std::abs(c.imag()) >= 1e-12 * std::max(1.0, std::abs(c))) {
            throw ValidationError("targets: coefficients carry an imaginary residue");
        }
    }
    return Vec4(1.0, c2.real(), c1.real(), c0.real());
}

EigTriple closed_loop_eigs(const PlantMatrices& plant, const Mat23& gain) {
    const Mat3 closed = plant.a - plant.b * gain;
    const Vec4 poly = char_poly(closed);
    EigTriple eigs = cubic_roots(poly(1), poly(2), poly(3));
    sort_by_re_im(eigs);
    return eigs;
}

FeedbackGain place_poles(const PlantMatrices& plant, const EigenvalueTargets& targets) {
    targets.validate();
    const ControllabilityReport ctrb = controllability(plant);
    if (!ctrb.controllable) {
        std::ostringstream oss;
        oss << "place_poles: plant is not completely controllable (rank " << ctrb.rank
            << ", singular values " << ctrb.singular_values.transpose() << ")";
        throw UncontrollableError(oss.str());
    }

    const Mat3 block = target_block_matrix(targets);

    // vec(a*x - x*block) = (I (x) a - block^T (x) I) vec(x) = vec(b*g)
    Eigen::Matrix<double, 9, 9> sylvester = Eigen::Matrix<double, 9, 9>::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) sylvester.block<3, 3>(3 * i, 3 * j) = plant.a;
            sylvester.block<3, 3>(3 * i, 3 * j) -= block(j, i) * Mat3::Identity();
        }
    }
    // Partial pivoting keeps near-singular but consistent systems solvable
    // (re-placing an already placed loop relies on the huge consistent
    // solution, whose inverse makes k vanish); exactly singular systems
    // surface as non-finite entries and fall through to the next candidate.
    const Eigen::PartialPivLU<Eigen::Matrix<double, 9, 9>> lu(sylvester);

    double best_error = std::numeric_limits<double>::infinity();
    double best_cond = std::numeric_limits<double>::infinity();
    int    rejected_cond = 0;

    for (const Mat23& g : parameter_matrices()) {
        const Mat3 bg = plant.b * g;
        Eigen::Matrix<double, 9, 1> rhs;
        rhs << bg.col(0), bg.col(1), bg.col(2);
        const Eigen::Matrix<double, 9, 1> vec_x = lu.solve(rhs);
        Mat3 x;
        x << vec_x.segment<3>(0), vec_x.segment<3>(3), vec_x.segment<3>(6);
        if (!x.allFinite()) {
            continue;
        }

        const Eigen::JacobiSVD<Mat3> svd(x);
        const double sigma_min = svd.singularValues()(2);
        const double cond = (sigma_min > 0.0) ? svd.singularValues()(0) / sigma_min
                                              : std::numeric_limits<double>::infinity();
        if (!(cond <= kCondLimit)) {
            ++rejected_cond;
            best_cond = std::min(best_cond, cond);
            continue;
        }

        // k = g * x^{-1}, via x^T k^T = g^T
        const Mat23 k = x.transpose().fullPivLu().solve(g.transpose()).transpose();
        if (!k.allFinite()) {
            continue;
        }

        FeedbackGain result;
        result.k = k;
        result.achieved_eigs = closed_loop_eigs(plant, k);
        result.max_rel_error = max_rel_distance(result.achieved_eigs, targets.lambdas);
        if (result.max_rel_error <= kCertTol) {
            return result;
        }
        best_error = std::min(best_error, result.max_rel_error);
    }

    std::ostringstream oss;
    oss << "place_poles: all " << parameter_matrices().size()
        << " parameter matrices failed (" << rejected_cond
        << " rejected with cond(x) > " << kCondLimit;
    if (std::isfinite(best_cond)) oss << ", smallest rejected cond " << best_cond;
    if (std::isfinite(best_error)) oss << "; best certificate error " << best_error;
    oss << ")";
    throw PlacementSingularError(oss.str());
}

}  // namespace gfpc
