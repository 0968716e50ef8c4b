#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgcubic/poly_core.hpp"
#include "pgcubic/region.hpp"

namespace pgcubic {

/// sup over tau >= 1 of h(tau) = p^2 r1(tau) + q^2 r2(tau), where
/// r1 = tau^10/(tau^4+3 m2)^4 and r2 = tau^10/(tau^4-3 m2)^4.  The global
/// solution criterion is S < 1/4.
struct SupResult {
    double sup_value = 0.0;
    double arg_tau = 1.0;
    long evaluations = 0;
};

/// One sample of the boundary curve
///   g_s(tau) = (sqrt(g1)/(1+3s), sqrt(g2)/(1-3s))  at height x3 = s.
struct BoundaryCurvePoint {
    double s;
    double tau;
    double g1;
    double g2;
    LambdaPoint point;
};

enum class ClassifyTag { kC1, kC2, kC3, kNotUnivalent, kBoundaryInconclusive };

std::string to_string(ClassifyTag tag);

/// Trichotomy verdict for an initial map:
///   C1 global strong solution, C2 blow-up with continuation,
///   C3 blow-up without continuation.  NOT_UNIVALENT means the input is
///   outside the univalent class and the trichotomy does not apply;
///   BOUNDARY_INCONCLUSIVE means the decision falls inside the tolerance band.
struct ClassificationResult {
    ClassifyTag tag;
    SupResult sup;
    RegionVerdict local_verdict;
    std::optional<RegionVerdict> univalence_verdict;  // only run when S > 1/4 + tol
    double tolerance;
};

struct ClassifyOptions {
    double tolerance = 1e-7;
    int univalence_samples = 4096;
};

/// h(tau) = p^2 tau^10/(tau^4+3 m2)^4 + q^2 tau^10/(tau^4-3 m2)^4.
/// Equals the ellipse expression of the trajectory point at parameter tau.
double h_value(double p, double q, double m2, double tau);

/// S = sup_{tau >= 1} h(tau).  h is decreasing for tau^4 >= 5 m2, so the
/// search runs on [1, max(1, (5 m2)^{1/4})]: dense grid then golden-section
/// refinement of the best bracket.  For m2 <= 1/5 the result is h(1) exactly.
SupResult sup_h(double p, double q, double m2);

/// Boundary-curve component functions:
///   g1 = (5s+tau^4)(tau^4+3s)^5 / (64 s tau^14)
///   g2 = (5s-tau^4)(tau^4-3s)^5 / (64 s tau^14)
double boundary_g1(double s, double tau);
double boundary_g2(double s, double tau);

/// (max{1, sqrt(21) s})^{1/4}: below this tau the curve parametrization is
/// redundant (dg1/dtau and dg2/dtau change sign at tau^8 = 21 s^2).
double tau_star(double s);

/// For s > 1/sqrt(21): the unique tau in (tau*(s), (5s)^{1/4}) where the curve
/// meets the ellipse boundary, by bisection to 1e-12.  For smaller s the
/// curve stays inside for tau > 1 and nullopt is returned.  Bracket signs are
/// verified at runtime.
std::optional<double> tau_double_star(double s);

/// n >= 2 samples of g_s over tau in [tau*(s), (5s)^{1/4}], endpoints
/// included.  x1 is non-decreasing and x2 non-increasing along the curve.
std::vector<BoundaryCurvePoint> boundary_curve(double s, int n);

/// Membership in the obstruction set A: with p = x1 (1+3 x3) and
/// q = -x2 (1-3 x3), true iff x3 in (1/5, 1/3) and there is a tau in
/// [tau*(x3), (5 x3)^{1/4}] with q^2 = g2 and p^2 >= g1.  The monotone g2 is
/// inverted by bisection; |p|, |q| are used (four-quadrant symmetry).
bool in_set_A(const LambdaPoint& x);

/// Full trichotomy classification.  Inputs with a1 != 1 are rescaled to the
/// a1 = 1 representative of the same trajectory first.  Requires the input's
/// m2 in (0, 1/3) and tolerance > 0.
ClassificationResult classify(const CubicMap& f, const ClassifyOptions& opts = {});
ClassificationResult classify(const CubicMap& f, double tolerance);

}  // namespace pgcubic
