#include "gfpc/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gfpc {

Vec4 char_poly(const Mat3& m) {
    // lambda^3 - tr(m) lambda^2 + (sum of principal 2x2 minors) lambda - det(m)
    const double c2 = -m.trace();
    const double c1 = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) +
                      (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
                      (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
    const double c0 = -m.determinant();
    return Vec4(1.0, c2, c1, c0);
}

EigTriple cubic_roots(double c2, double c1, double c0) {
    // Depressed form t^3 + p*t + q with lambda = t - c2/3.
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;

    const double scale = std::max({std::abs(p), std::abs(q), 1.0});
    if (std::abs(p) <= 1e-15 * scale && std::abs(q) <= 1e-15 * scale) {
        const Complex triple(-shift, 0.0);
        return {triple, triple, triple};
    }

    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        // One real root, one conjugate pair. Take the cube root on the side
        // that avoids cancellation, recover the partner from u*v = -p/3.
        const double sq = std::sqrt(disc);
        const double u = (q <= 0.0) ? std::cbrt(-0.5 * q + sq) : std::cbrt(-0.5 * q - sq);
        const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
        const double t_real = u + v;
        const double re = -0.5 * t_real - shift;
        const double im = 0.5 * std::sqrt(3.0) * std::abs(u - v);
        return {Complex(t_real - shift, 0.0), Complex(re, im), Complex(re, -im)};
    }

    // Three real roots (p < 0 here): trigonometric branch.
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    EigTriple roots;
    for (int k = 0; k < 3; ++k) {
        const double t = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
        roots[k] = Complex(t - shift, 0.0);
    }
    return roots;
}

}  // namespace gfpc
