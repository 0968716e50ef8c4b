#include "pgcubic/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pgcubic/errors.hpp"

namespace pgcubic {

namespace {

constexpr double kRelTol = 1e-13;

double m0_from_labels(double p, double q, double m2, double tau) {
    const double t2 = tau * tau;
    const double t4 = t2 * t2;
    const double re = p * t2 / (t4 + 3.0 * m2);
    const double im = -q * t2 / (t4 - 3.0 * m2);
    const double a3 = m2 / (t2 * tau);
    return t2 + 2.0 * (re * re + im * im) + 3.0 * a3 * a3;
}

struct Excursion {
    double tau_exit;     // first h = 1/4 contact after tau0
    double t_star;       // time of first contact
    double tau_reentry;  // h back below 1/4 (== tau_exit for a tangential touch)
};

double h_max_on(const Trajectory& tr, double lo, double hi, double* arg) {
    constexpr int kGrid = 1024;
    double best = h_value(tr.p, tr.q, tr.m2, lo);
    double best_tau = lo;
    for (int k = 1; k < kGrid; ++k) {
        const double tau = lo + (hi - lo) * k / (kGrid - 1);
        const double h = h_value(tr.p, tr.q, tr.m2, tau);
        if (h > best) {
            best = h;
            best_tau = tau;
        }
    }
    const double step = (hi - lo) / (kGrid - 1);
    double a = std::max(lo, best_tau - step);
    double b = std::min(hi, best_tau + step);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    while (b - a > 1e-12) {
        const double x1 = b - invphi * (b - a);
        const double x2 = a + invphi * (b - a);
        if (h_value(tr.p, tr.q, tr.m2, x1) < h_value(tr.p, tr.q, tr.m2, x2))
            a = x1;
        else
            b = x2;
    }
    const double tau = 0.5 * (a + b);
    const double h = h_value(tr.p, tr.q, tr.m2, tau);
    if (h > best) {
        best = h;
        best_tau = tau;
    }
    *arg = best_tau;
    return best;
}

// Bisects h = 1/4 on [a, b]; rising selects the branch with h(a) < 1/4 < h(b).
double bisect_quarter(const Trajectory& tr, double a, double b, bool rising) {
    while (b - a > 1e-13 * std::max(1.0, b)) {
        const double m = 0.5 * (a + b);
        const bool above = h_value(tr.p, tr.q, tr.m2, m) > 0.25;
        if (above == rising)
            b = m;
        else
            a = m;
    }
    return 0.5 * (a + b);
}

// Locates the locally-univalent exit of the trajectory, if any, past tau0.
std::optional<Excursion> find_excursion(const Trajectory& tr) {
    const double h0 = h_value(tr.p, tr.q, tr.m2, tr.tau0);
    if (h0 > 0.25 + 1e-12)
        throw std::domain_error("trajectory is not locally univalent at tau0");
    const double tau_end = std::max(tr.tau0, std::pow(5.0 * tr.m2, 0.25));
    if (tau_end <= tr.tau0) return std::nullopt;  // h decreasing from tau0 on
    double arg = tr.tau0;
    const double hmax = h_max_on(tr, tr.tau0, tau_end, &arg);
    if (!(hmax >= 0.25)) return std::nullopt;

    Excursion exc;
    exc.tau_exit = h0 >= 0.25 ? tr.tau0 : bisect_quarter(tr, tr.tau0, arg, true);
    exc.t_star = (m0_from_labels(tr.p, tr.q, tr.m2, exc.tau_exit) - tr.m0_initial) / 2.0;
    if (hmax > 0.25) {
        // h is decreasing past tau_end, so it is back below 1/4 by tau_end + 1.
        double b = tau_end + 1.0;
        while (h_value(tr.p, tr.q, tr.m2, b) > 0.25) b += 1.0;
        exc.tau_reentry = bisect_quarter(tr, arg, b, false);
    } else {
        exc.tau_reentry = exc.tau_exit;  // tangential touch
    }
    return exc;
}

// Monotone inversion of M0 on [a, b] (dM0/dtau >= 0 there).
double invert_m0(const Trajectory& tr, double target, double a, double b) {
    while (b - a > kRelTol * std::max(1.0, b)) {
        const double m = 0.5 * (a + b);
        if (m0_from_labels(tr.p, tr.q, tr.m2, m) < target)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

ClassifyTag gated_tag(const CubicMap& f0, const ClassifyOptions& opts) {
    const ClassificationResult cls = classify(f0, opts);
    if (cls.tag == ClassifyTag::kNotUnivalent || cls.tag == ClassifyTag::kBoundaryInconclusive)
        throw ClassificationError("operation requires C1/C2/C3 initial data, got " +
                                  to_string(cls.tag));
    return cls.tag;
}

}  // namespace

Trajectory trajectory_of(const CubicMap& f) {
    if (!(f.a3 > 0.0)) throw std::domain_error("trajectory_of: requires a3 > 0");
    if (!(f.a1 >= 1.0)) throw std::domain_error("trajectory_of: requires a1 >= 1");
    const MomentData m = moments(f);
    return Trajectory{m.m1.real(), m.m1.imag(), m.m2, f.a1, m.m0};
}

double m0_of_tau(const Trajectory& traj, double tau) {
    if (!(tau >= 1.0)) throw std::domain_error("m0_of_tau: requires tau >= 1");
    return m0_from_labels(traj.p, traj.q, traj.m2, tau);
}

double time_of_tau(const Trajectory& traj, double tau) {
    if (!(tau >= traj.tau0)) throw std::domain_error("time_of_tau: requires tau >= tau0");
    return (m0_of_tau(traj, tau) - traj.m0_initial) / 2.0;
}

double tau_of_time(const Trajectory& traj, double t) {
    if (!(t >= 0.0)) throw std::domain_error("tau_of_time: requires t >= 0");
    if (t == 0.0) return traj.tau0;
    const double target = traj.m0_initial + 2.0 * t;
    // M0(tau) >= tau^2, so this always brackets the target.
    const double tau_hi = std::sqrt(target) + 1.0;

    const auto exc = find_excursion(traj);
    if (!exc || exc->tau_reentry == exc->tau_exit)
        return invert_m0(traj, target, traj.tau0, tau_hi);
    if (t <= exc->t_star) return invert_m0(traj, target, traj.tau0, exc->tau_exit);
    return invert_m0(traj, target, exc->tau_reentry, std::max(tau_hi, exc->tau_reentry));
}

double injection_rate(const Trajectory& traj, double tau) {
    if (!(tau >= 1.0)) throw std::domain_error("injection_rate: requires tau >= 1");
    const double t2 = tau * tau;
    const double t4 = t2 * t2;
    const double t7 = t4 * t2 * tau;
    const double t8 = t4 * t4;
    const double h = h_value(traj.p, traj.q, traj.m2, tau);
    return (t8 - 9.0 * traj.m2 * traj.m2) * (1.0 - 4.0 * h) / t7;
}

std::string to_string(CuspOrder order) {
    switch (order) {
        case CuspOrder::kThreeHalf: return "3/2";
        case CuspOrder::kFiveHalf: return "5/2";
        case CuspOrder::kSevenHalf: return "7/2";
        case CuspOrder::kNineHalf: return "9/2";
        case CuspOrder::kUnresolved: return "unresolved";
    }
    return "?";
}

CuspReport cusp_report(const CubicMap& f_star, Complex zeta0, const CuspFitOptions& opts) {
    if (std::abs(std::abs(zeta0) - 1.0) > 1e-8)
        throw PreconditionError("cusp_report: zeta0 must lie on the unit circle");
    const double theta0 = std::arg(zeta0);
    const Complex z_unit = std::polar(1.0, theta0);
    const double coeff_scale = f_star.a1 + 2.0 * std::abs(f_star.a2) + 3.0 * f_star.a3;
    if (std::abs(f_star.derivative(z_unit)) > 1e-6 * coeff_scale)
        throw PreconditionError("cusp_report: zeta0 is not a critical point of f'");

    CuspReport rep;
    rep.location = f_star.value(z_unit);
    rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    rep.declared_order = CuspOrder::kUnresolved;
    rep.fit_residual = std::numeric_limits<double>::infinity();

    // Cusp tangent: z''(theta0) = -zeta0^2 f''(zeta0) since f'(zeta0) = 0.
    const Complex dir = -z_unit * z_unit * f_star.second_derivative(z_unit);
    if (std::abs(dir) < 1e-9 * coeff_scale) return rep;  // degenerate double root
    const Complex e_u = dir / std::abs(dir);

    std::vector<double> lu, lv;
    const double ratio = opts.delta_max / opts.delta_min;
    for (int k = 0; k < opts.ladder_size; ++k) {
        const double delta =
            opts.delta_min * std::pow(ratio, static_cast<double>(k) / (opts.ladder_size - 1));
        for (const double sgn : {1.0, -1.0}) {
            const Complex w = f_star.value(std::polar(1.0, theta0 + sgn * delta)) - rep.location;
            const Complex c = w * std::conj(e_u);
            const double u = std::abs(c.real());
            const double v = std::abs(c.imag());
            if (u < opts.noise_floor || v < opts.noise_floor) continue;
            lu.push_back(std::log(u));
            lv.push_back(std::log(v));
        }
    }
    if (lu.size() < 6) return rep;

    const auto n = static_cast<double>(lu.size());
    double su = 0.0, sv = 0.0, suu = 0.0, suv = 0.0;
    for (size_t i = 0; i < lu.size(); ++i) {
        su += lu[i];
        sv += lv[i];
        suu += lu[i] * lu[i];
        suv += lu[i] * lv[i];
    }
    const double denom = n * suu - su * su;
    if (std::abs(denom) < 1e-12) return rep;
    const double beta = (n * suv - su * sv) / denom;
    const double c0 = (sv - beta * su) / n;
    double ss = 0.0;
    for (size_t i = 0; i < lu.size(); ++i) {
        const double r = lv[i] - (beta * lu[i] + c0);
        ss += r * r;
    }
    rep.fitted_exponent = beta;
    rep.fit_residual = std::sqrt(ss / n);

    constexpr double kOrders[] = {1.5, 2.5, 3.5, 4.5};
    constexpr CuspOrder kTags[] = {CuspOrder::kThreeHalf, CuspOrder::kFiveHalf,
                                   CuspOrder::kSevenHalf, CuspOrder::kNineHalf};
    int nearest = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(beta - kOrders[i]) < std::abs(beta - kOrders[nearest])) nearest = i;
    if (std::abs(beta - kOrders[nearest]) < opts.exponent_window &&
        rep.fit_residual < opts.residual_max)
        rep.declared_order = kTags[nearest];
    return rep;
}

EvolveResult evolve(const CubicMap& f0, double t, const EvolveOptions& opts) {
    if (f0.a1 != 1.0) throw std::invalid_argument("evolve: requires a1 == 1");
    if (!(t >= 0.0)) throw std::domain_error("evolve: requires t >= 0");
    const ClassifyTag tag = gated_tag(f0, opts.classify);
    const Trajectory traj = trajectory_of(f0);
    const double tau = tau_of_time(traj, t);
    bool valid = true;
    if (tag == ClassifyTag::kC3) {
        const auto exc = find_excursion(traj);
        valid = exc ? t < exc->t_star : true;
    }
    return EvolveResult{coefficients_from_moments(traj.p, traj.q, traj.m2, tau), tau, t, valid};
}

CubicMap evolve_on(const Trajectory& traj, double t) {
    return coefficients_from_moments(traj.p, traj.q, traj.m2, tau_of_time(traj, t));
}

BlowUpReport blow_up(const CubicMap& f0, const EvolveOptions& opts) {
    if (f0.a1 != 1.0) throw std::invalid_argument("blow_up: requires a1 == 1");
    const ClassificationResult cls = classify(f0, opts.classify);
    if (cls.tag == ClassifyTag::kNotUnivalent || cls.tag == ClassifyTag::kBoundaryInconclusive)
        throw ClassificationError("blow_up: requires C1/C2/C3 initial data, got " +
                                  to_string(cls.tag));

    BlowUpReport rep;
    if (cls.tag == ClassifyTag::kC1) return rep;

    const Trajectory traj = trajectory_of(f0);
    double tau_b;
    if (cls.tag == ClassifyTag::kC2) {
        // Tangential touch: located at the maximum of h, not a sign change.
        tau_b = cls.sup.arg_tau;
    } else {
        const auto exc = find_excursion(traj);
        if (!exc) throw NumericalError("blow_up: C3 trajectory has no boundary contact");
        tau_b = exc->tau_exit;
    }

    rep.blows_up = true;
    rep.tau_blow = tau_b;
    rep.t_star = time_of_tau(traj, tau_b);
    rep.continuable = cls.tag == ClassifyTag::kC2;

    const CubicMap f_star = coefficients_from_moments(traj.p, traj.q, traj.m2, tau_b);
    const auto roots = critical_points(f_star);
    const Complex zeta0 =
        std::abs(std::abs(roots[0]) - 1.0) <= std::abs(std::abs(roots[1]) - 1.0) ? roots[0]
                                                                                 : roots[1];
    if (std::abs(std::abs(zeta0) - 1.0) > 1e-8)
        throw NumericalError("blow_up: critical point did not land on the unit circle");
    rep.zeta0 = zeta0;
    rep.cusp = cusp_report(f_star, zeta0, opts.cusp);
    return rep;
}

CubicMap continue_after_blowup(const CubicMap& f0, double t, const EvolveOptions& opts) {
    if (f0.a1 != 1.0) throw std::invalid_argument("continue_after_blowup: requires a1 == 1");
    const ClassificationResult cls = classify(f0, opts.classify);
    if (cls.tag != ClassifyTag::kC2)
        throw ClassificationError("continue_after_blowup: requires C2 initial data, got " +
                                  to_string(cls.tag));
    const Trajectory traj = trajectory_of(f0);
    const double t_star = time_of_tau(traj, cls.sup.arg_tau);
    if (!(t > t_star)) throw std::domain_error("continue_after_blowup: requires t > t*");
    const CubicMap f = evolve_on(traj, t);
    const RegionVerdict back_inside = in_local_region(lambda_map(f));
    if (!back_inside.member)
        throw NumericalError("continue_after_blowup: continued map is not locally univalent");
    return f;
}

std::vector<TrajectorySample> trajectory_scan(const CubicMap& f0, int n, const ScanOptions& opts) {
    if (f0.a1 != 1.0) throw std::invalid_argument("trajectory_scan: requires a1 == 1");
    if (n < 2) throw std::invalid_argument("trajectory_scan: requires n >= 2");
    const ClassifyTag tag = gated_tag(f0, opts.evolve.classify);
    const Trajectory traj = trajectory_of(f0);

    double tau_end;
    if (opts.tau_max) {
        tau_end = *opts.tau_max;
        if (!(tau_end > traj.tau0))
            throw std::invalid_argument("trajectory_scan: tau_max must exceed tau0");
    } else {
        // Default range: out to where m2/tau^4 has decayed below 1e-4.
        tau_end = std::max(std::pow(traj.m2 / 1e-4, 0.25), traj.tau0 + 1.0);
    }

    std::optional<double> tau_invalid_from;
    if (tag == ClassifyTag::kC3) {
        const auto exc = find_excursion(traj);
        if (exc) tau_invalid_from = exc->tau_exit;
    }

    std::vector<TrajectorySample> out;
    out.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double tau = traj.tau0 + (tau_end - traj.tau0) * k / (n - 1);
        TrajectorySample s;
        s.tau = tau;
        s.t = time_of_tau(traj, tau);
        s.point = lambda_map(coefficients_from_moments(traj.p, traj.q, traj.m2, tau));
        s.ellipse_margin = 0.25 - h_value(traj.p, traj.q, traj.m2, tau);
        s.valid = !tau_invalid_from || tau < *tau_invalid_from;
        out.push_back(s);
    }
    return out;
}

}  // namespace pgcubic
