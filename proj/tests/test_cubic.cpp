#include <catch2/catch_amalgamated.hpp>

#include "gfpc/cubic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

using namespace gfpc;
using Catch::Approx;

namespace {

void sort_eigs(EigTriple& v) {
    std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
}

}  // namespace

TEST_CASE("char_poly of a known matrix") {
    Mat3 m;
    m << 2, 0, 1,
         0, 3, 0,
         1, 0, 2;
    // eigenvalues 1, 3, 3 -> (x-1)(x-3)^2 = x^3 - 7x^2 + 15x - 9
    const Vec4 poly = char_poly(m);
    CHECK(poly(0) == 1.0);
    CHECK(poly(1) == Approx(-7.0));
    CHECK(poly(2) == Approx(15.0));
    CHECK(poly(3) == Approx(-9.0));
}

TEST_CASE("cubic_roots on a triple root") {
    const EigTriple roots = cubic_roots(3.0, 3.0, 1.0);  // (x+1)^3
    for (const Complex& r : roots) {
        CHECK(r.real() == Approx(-1.0).epsilon(1e-7));
        CHECK(r.imag() == Approx(0.0).margin(1e-7));
    }
}

TEST_CASE("cubic_roots on three distinct real roots") {
    EigTriple roots = cubic_roots(6.0, 11.0, 6.0);  // (x+1)(x+2)(x+3)
    sort_eigs(roots);
    CHECK(roots[0].real() == Approx(-3.0).epsilon(1e-12));
    CHECK(roots[1].real() == Approx(-2.0).epsilon(1e-12));
    CHECK(roots[2].real() == Approx(-1.0).epsilon(1e-12));
    for (const Complex& r : roots) CHECK(r.imag() == 0.0);
}

TEST_CASE("cubic_roots on the dominant-pair polynomial") {
    // (x+20)(x^2+8x+100) = x^3 + 28x^2 + 260x + 2000
    EigTriple roots = cubic_roots(28.0, 260.0, 2000.0);
    sort_eigs(roots);
    CHECK(roots[0] == Complex(-20.0, 0.0));
    CHECK(roots[1].real() == Approx(-4.0).epsilon(1e-12));
    CHECK(roots[1].imag() == Approx(-9.16515138991168).epsilon(1e-12));
    CHECK(roots[2] == std::conj(roots[1]));
}

TEST_CASE("cubic_roots cross-checked against the iterative eigensolver") {
    std::mt19937 rng(31415);
    std::uniform_real_distribution<double> entry(-5.0, 5.0);
    for (int draw = 0; draw < 200; ++draw) {
        Mat3 m;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m(i, j) = entry(rng);
        }
        // occasionally exercise the wide dynamic range of the plant matrices
        if (draw % 5 == 0) m.row(2) *= 314.0;

        const Vec4 poly = char_poly(m);
        EigTriple mine = cubic_roots(poly(1), poly(2), poly(3));
        sort_eigs(mine);

        const Eigen::EigenSolver<Mat3> solver(m);
        EigTriple reference = {solver.eigenvalues()(0), solver.eigenvalues()(1),
                               solver.eigenvalues()(2)};
        sort_eigs(reference);

        double scale = 0.0;
        for (const Complex& r : reference) scale = std::max(scale, std::abs(r));
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(mine[i] - reference[i]) <= 1e-7 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("roots reproduce their polynomial") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> coeff(-30.0, 30.0);
    for (int draw = 0; draw < 100; ++draw) {
        const double c2 = coeff(rng), c1 = coeff(rng), c0 = coeff(rng);
        const EigTriple roots = cubic_roots(c2, c1, c0);
        for (const Complex& r : roots) {
            const Complex value = ((r + c2) * r + c1) * r + c0;
            const double scale =
                std::max({1.0, std::abs(r) * std::abs(r) * std::abs(r), std::abs(c0)});
            CHECK(std::abs(value) <= 1e-9 * scale);
        }
    }
}
