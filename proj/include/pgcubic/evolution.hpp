#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgcubic/criterion.hpp"
#include "pgcubic/poly_core.hpp"

namespace pgcubic {

/// Conserved labels of a solution family plus its starting radius.  The
/// whole evolution is the curve tau -> coefficients_from_moments(p,q,m2,tau)
/// with time recovered from the area law M0(t) = 2t + M0(0).
struct Trajectory {
    double p;
    double q;
    double m2;
    double tau0;
    double m0_initial;
};

/// Labels of the trajectory through f.  Requires a3 > 0 and a1 >= 1.
Trajectory trajectory_of(const CubicMap& f);

/// M0 along the trajectory: tau^2 + 2|a2(tau)|^2 + 3 a3(tau)^2.
double m0_of_tau(const Trajectory& traj, double tau);

/// t = (M0(tau) - M0(tau0)) / 2.  Requires tau >= tau0.
double time_of_tau(const Trajectory& traj, double tau);

/// Inverse of time_of_tau on the physical branch.  M0 is strictly increasing
/// while the trajectory stays inside the locally-univalent region
/// (Q > 0 iff h < 1/4); past a C3 exit it decreases, so for t beyond the
/// blow-up time the inverse is taken on the final increasing branch.
double tau_of_time(const Trajectory& traj, double t);

/// Injection rate Q(tau) = (1/2) dM0/dtau, in the closed form
/// (tau^8 - 9 m2^2)(1 - 4 h(tau)) / tau^7.  Positive exactly where the
/// trajectory point is strictly inside the locally-univalent region.
double injection_rate(const Trajectory& traj, double tau);

enum class CuspOrder { kThreeHalf, kFiveHalf, kSevenHalf, kNineHalf, kUnresolved };

std::string to_string(CuspOrder order);

/// Least-squares exponent fit of the boundary singularity at a critical
/// point on the unit circle.
struct CuspReport {
    Complex location;          // f(zeta0), image of the cusp
    double fitted_exponent;    // slope of log|v| vs log|u|
    CuspOrder declared_order;  // nearest half-integer when the fit is tight
    double fit_residual;       // RMS residual of the log-log fit
};

struct CuspFitOptions {
    double delta_min = 1e-6;   // angular offset ladder, log-spaced
    double delta_max = 1e-2;
    int ladder_size = 40;      // offsets per sign
    double noise_floor = 1e-13;  // samples with |u| or |v| below this are dropped
    double residual_max = 0.05;
    double exponent_window = 0.15;
};

/// Fits v ~ C u^beta near the cusp, where u is the component along the cusp
/// tangent and v the normal component.  Requires |zeta0| = 1 within 1e-8 and
/// f'(zeta0) ~ 0 (PreconditionError otherwise).  Deviations smaller than the
/// noise floor are excluded: a 9/2 cusp's normal deflection is below double
/// precision at these offsets and yields kUnresolved rather than a fake fit.
CuspReport cusp_report(const CubicMap& f_star, Complex zeta0, const CuspFitOptions& opts = {});

struct BlowUpReport {
    bool blows_up = false;
    std::optional<double> tau_blow;
    std::optional<double> t_star;
    std::optional<Complex> zeta0;   // critical point on the unit circle
    std::optional<CuspReport> cusp;
    bool continuable = false;
};

struct EvolveOptions {
    ClassifyOptions classify;
    CuspFitOptions cusp;
};

/// Snapshot of the solution at time t.  valid is false for C3 data past the
/// blow-up time: the coefficient formulas continue smoothly but the map no
/// longer bounds a physical interface.
struct EvolveResult {
    CubicMap map;
    double tau;
    double t;
    bool valid;
};

/// Exact moment-conserving evolution: map at tau_of_time(t).  Requires
/// classify(f0) in {C1, C2, C3} (ClassificationError otherwise).
EvolveResult evolve(const CubicMap& f0, double t, const EvolveOptions& opts = {});

/// Same step without the classification gate, for bulk trajectory work.
CubicMap evolve_on(const Trajectory& traj, double t);

/// Locates the first tau_b > tau0 where the trajectory meets the boundary of
/// the locally-univalent region (h = 1/4): the h-maximum for a tangential C2
/// touch, a sign-change bisection for a transversal C3 exit.  Reports the
/// circle critical point, blow-up time and cusp fit.  blows_up is false for
/// C1 data; continuable is true exactly for C2.
BlowUpReport blow_up(const CubicMap& f0, const EvolveOptions& opts = {});

/// Evolution past a C2 blow-up.  Requires classify(f0) == C2 and t > t*;
/// asserts that the continued map is strictly locally univalent again.
CubicMap continue_after_blowup(const CubicMap& f0, double t, const EvolveOptions& opts = {});

struct TrajectorySample {
    double t;
    double tau;
    LambdaPoint point;
    double ellipse_margin;  // 1/4 - h(tau)
    bool valid;
};

struct ScanOptions {
    EvolveOptions evolve;
    std::optional<double> tau_max;  // default: tau with m2/tau^4 = 1e-4
};

/// n >= 2 samples of the trajectory over [tau0, tau_max], with times, Lambda
/// points and ellipse margins, ordered by tau.
std::vector<TrajectorySample> trajectory_scan(const CubicMap& f0, int n,
                                              const ScanOptions& opts = {});

}  // namespace pgcubic
