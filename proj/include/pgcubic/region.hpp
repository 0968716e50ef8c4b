#pragma once

#include <array>
#include <optional>

#include "pgcubic/poly_core.hpp"

namespace pgcubic {

/// Width of the boundary band: verdicts whose margin is this close to the
/// threshold are reported but flagged inconclusive.  Every region involved is
/// open, so strict inequalities cannot be witnessed at the boundary in
/// floating point.
inline constexpr double kBoundaryBand = 1e-6;

/// Outcome of a region membership test.  member == (margin > 0) always holds;
/// margin is the signed distance of the test expression from its threshold
/// (-inf when a hard range constraint such as 0 < x3 < 1/3 fails).  witness
/// carries a violating critical point or a boundary self-intersection point.
struct RegionVerdict {
    bool member = false;
    double margin = 0.0;
    std::optional<Complex> witness;
    bool inconclusive = false;
};

/// Analytic test for the locally-univalent coefficient region: member iff
///   x1^2/(1+3 x3)^2 + x2^2/(1-3 x3)^2 < 1/4  and  0 < x3 < 1/3.
/// margin = 1/4 - LHS when the x3 constraint holds.
RegionVerdict in_local_region(const LambdaPoint& x);

/// Both roots of f'(z) = a1 + 2 a2 z + 3 a3 z^2, sorted by ascending modulus.
/// Product of the roots is a1/(3 a3).  Requires a3 > 0.
std::array<Complex, 2> critical_points(const CubicMap& f);

/// Root-based oracle for local univalence on the closed disk:
/// member iff min |root of f'| > 1; margin = min|root| - 1.
RegionVerdict local_univalence_oracle(const CubicMap& f);

struct UnivalenceOptions {
    int n_samples = 4096;       // boundary polyline resolution, >= 256
    int max_refinements = 8;    // arc bisection depth for suspect pairs
    double orientation_band = 1e-12;  // relative band for degenerate predicates
};

/// Semi-decision oracle for univalence on the closed disk: member iff f' has
/// no root with |root| <= 1 and the sampled boundary curve f(e^{i theta}) has
/// no self-intersection.  Near-tangencies that survive the configured
/// refinement depth are flagged inconclusive.  A confirmed crossing reports
/// the intersection point as witness with margin -1.
RegionVerdict univalence_oracle(const CubicMap& f, const UnivalenceOptions& opts = {});
RegionVerdict univalence_oracle(const CubicMap& f, int n_samples);

}  // namespace pgcubic
