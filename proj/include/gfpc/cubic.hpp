#pragma once

#include "gfpc/types.hpp"

namespace gfpc {

/// Coefficients (1, c2, c1, c0) of the characteristic polynomial
/// lambda^3 + c2*lambda^2 + c1*lambda + c0 of a real 3x3 matrix.
Vec4 char_poly(const Mat3& m);

/// Roots of the monic cubic lambda^3 + c2*lambda^2 + c1*lambda + c0, by
/// Cardano's formula with the trigonometric branch when all three roots are
/// real. Complex roots come out as an exact conjugate pair; real roots carry
/// a zero imaginary part. Unordered.
EigTriple cubic_roots(double c2, double c1, double c0);

}  // namespace gfpc
