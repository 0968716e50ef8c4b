#pragma once

#include <complex>

#include "pgcubic/errors.hpp"

namespace pgcubic {

using Complex = std::complex<double>;

/// Conformal map f(z) = a1*z + a2*z^2 + a3*z^3 in rotation-normalized form:
/// a1 > 0 and a3 real >= 0.  Degree is exactly three when a3 > 0.
struct CubicMap {
    double a1;
    Complex a2;
    double a3;

    CubicMap(double a1_, Complex a2_, double a3_) : a1(a1_), a2(a2_), a3(a3_) {
        if (!(a1 > 0.0)) throw std::invalid_argument("CubicMap: a1 must be positive");
        if (!(a3 >= 0.0)) throw std::invalid_argument("CubicMap: a3 must be non-negative");
    }

    Complex value(Complex z) const { return ((a3 * z + a2) * z + a1) * z; }
    Complex derivative(Complex z) const { return (3.0 * a3 * z + 2.0 * a2) * z + a1; }
    Complex second_derivative(Complex z) const { return 2.0 * a2 + 6.0 * a3 * z; }
};

/// Richardson moments of a cubic map.  m1 and m2 are conserved along
/// solutions; m0 grows linearly in time (area law).
struct MomentData {
    double m0;
    Complex m1;  // p + i q
    double m2;
};

/// Leading-coefficient-normalized coefficient point
/// (Re(a2/a1), Im(a2/a1), a3/a1).
struct LambdaPoint {
    double x1;
    double x2;
    double x3;
};

/// Rotate coefficients a_j -> a_j * e^{i (j-1) theta} with theta chosen so the
/// cubic coefficient becomes real and positive.  a1 and |a2| are unchanged.
/// Throws DegenerateDegreeError when a3 == 0.
CubicMap normalize_rotation(double a1, Complex a2, Complex a3);

/// Exact moments of a normalized cubic:
///   m0 = a1^2 + 2|a2|^2 + 3 a3^2
///   m1 = a1^2 conj(a2) + 3 a1 a2 a3
///   m2 = a1^3 a3
MomentData moments(const CubicMap& f);

/// (Re(a2/a1), Im(a2/a1), a3/a1).  Requires a3 > 0.
LambdaPoint lambda_map(const CubicMap& f);

/// Invert the moment map at leading coefficient tau >= 1:
///   a1 = tau,  a2 = p tau^2/(tau^4+3 m2) - i q tau^2/(tau^4-3 m2),  a3 = m2/tau^3.
/// Round-trips with moments() to machine precision.  Throws
/// SingularParametrizationError when a denominator falls below 1e-12.
CubicMap coefficients_from_moments(double p, double q, double m2, double tau);

}  // namespace pgcubic
