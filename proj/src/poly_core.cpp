#include "pgcubic/poly_core.hpp"

#include <cmath>

namespace pgcubic {

CubicMap normalize_rotation(double a1, Complex a2, Complex a3) {
    if (!(a1 > 0.0)) throw std::invalid_argument("normalize_rotation: a1 must be positive");
    const double r3 = std::abs(a3);
    if (r3 == 0.0) throw DegenerateDegreeError("normalize_rotation: a3 == 0, degree-two input");
    // a3 e^{2 i theta} = |a3| for theta = -arg(a3)/2; a2 picks up e^{i theta}.
    const double theta = -std::arg(a3) / 2.0;
    const Complex rot = std::polar(1.0, theta);
    return CubicMap(a1, a2 * rot, r3);
}

MomentData moments(const CubicMap& f) {
    const double m0 = f.a1 * f.a1 + 2.0 * std::norm(f.a2) + 3.0 * f.a3 * f.a3;
    const Complex m1 = f.a1 * f.a1 * std::conj(f.a2) + 3.0 * f.a1 * f.a3 * f.a2;
    const double m2 = f.a1 * f.a1 * f.a1 * f.a3;
    return MomentData{m0, m1, m2};
}

LambdaPoint lambda_map(const CubicMap& f) {
    if (!(f.a3 > 0.0)) throw std::domain_error("lambda_map: requires a3 > 0");
    return LambdaPoint{f.a2.real() / f.a1, f.a2.imag() / f.a1, f.a3 / f.a1};
}

CubicMap coefficients_from_moments(double p, double q, double m2, double tau) {
    if (!(m2 > 0.0)) throw std::domain_error("coefficients_from_moments: requires m2 > 0");
    if (!(tau >= 1.0)) throw std::domain_error("coefficients_from_moments: requires tau >= 1");
    const double t2 = tau * tau;
    const double t4 = t2 * t2;
    const double dplus = t4 + 3.0 * m2;
    const double dminus = t4 - 3.0 * m2;
    constexpr double kDenominatorFloor = 1e-12;
    if (std::abs(dplus) < kDenominatorFloor || std::abs(dminus) < kDenominatorFloor)
        throw SingularParametrizationError("coefficients_from_moments: moment parametrization singular");
    const Complex a2(p * t2 / dplus, -q * t2 / dminus);
    return CubicMap(tau, a2, m2 / (t2 * tau));
}

}  // namespace pgcubic
