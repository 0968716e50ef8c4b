#include "pgcubic/criterion.hpp"

#include <cmath>

#include "pgcubic/errors.hpp"

namespace pgcubic {

namespace {

double pow4(double v) {
    const double v2 = v * v;
    return v2 * v2;
}

constexpr int kSupGridPoints = 2048;
constexpr double kSupTauResolution = 1e-10;
constexpr double kBisectionTol = 1e-12;

}  // namespace

std::string to_string(ClassifyTag tag) {
    switch (tag) {
        case ClassifyTag::kC1: return "C1";
        case ClassifyTag::kC2: return "C2";
        case ClassifyTag::kC3: return "C3";
        case ClassifyTag::kNotUnivalent: return "NOT_UNIVALENT";
        case ClassifyTag::kBoundaryInconclusive: return "BOUNDARY_INCONCLUSIVE";
    }
    return "?";
}

double h_value(double p, double q, double m2, double tau) {
    const double t2 = tau * tau;
    const double t4 = t2 * t2;
    const double t10 = t4 * t4 * t2;
    const double r1 = t10 / pow4(t4 + 3.0 * m2);
    const double r2 = t10 / pow4(t4 - 3.0 * m2);
    return p * p * r1 + q * q * r2;
}

SupResult sup_h(double p, double q, double m2) {
    if (!(m2 > 0.0 && m2 < 1.0 / 3.0))
        throw std::domain_error("sup_h: requires 0 < m2 < 1/3");
    SupResult res;
    res.sup_value = h_value(p, q, m2, 1.0);
    res.arg_tau = 1.0;
    res.evaluations = 1;

    const double tau_hi = std::pow(5.0 * m2, 0.25);
    if (!(tau_hi > 1.0)) return res;  // m2 <= 1/5: h decreasing on [1, inf)

    for (int k = 1; k < kSupGridPoints; ++k) {
        const double tau = 1.0 + (tau_hi - 1.0) * k / (kSupGridPoints - 1);
        const double h = h_value(p, q, m2, tau);
        ++res.evaluations;
        if (h > res.sup_value) {
            res.sup_value = h;
            res.arg_tau = tau;
        }
    }

    // Golden-section refinement of the bracket around the best grid point.
    const double step = (tau_hi - 1.0) / (kSupGridPoints - 1);
    double a = std::max(1.0, res.arg_tau - step);
    double b = std::min(tau_hi, res.arg_tau + step);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = h_value(p, q, m2, x1);
    double f2 = h_value(p, q, m2, x2);
    res.evaluations += 2;
    while (b - a > kSupTauResolution) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = h_value(p, q, m2, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = h_value(p, q, m2, x1);
        }
        ++res.evaluations;
    }
    const double tau_ref = 0.5 * (a + b);
    const double h_ref = h_value(p, q, m2, tau_ref);
    ++res.evaluations;
    if (h_ref > res.sup_value) {
        res.sup_value = h_ref;
        res.arg_tau = tau_ref;
    }
    return res;
}

double boundary_g1(double s, double tau) {
    const double t2 = tau * tau;
    const double t4 = t2 * t2;
    const double t14 = t4 * t4 * t4 * t2;
    const double b = t4 + 3.0 * s;
    const double b5 = pow4(b) * b;
    return (5.0 * s + t4) * b5 / (64.0 * s * t14);
}

double boundary_g2(double s, double tau) {
    const double t2 = tau * tau;
    const double t4 = t2 * t2;
    const double t14 = t4 * t4 * t4 * t2;
    const double b = t4 - 3.0 * s;
    const double b5 = pow4(b) * b;
    return (5.0 * s - t4) * b5 / (64.0 * s * t14);
}

double tau_star(double s) {
    return std::pow(std::max(1.0, std::sqrt(21.0) * s), 0.25);
}

namespace {

// Ellipse expression of the curve point minus 1/4.
double curve_ellipse_excess(double s, double tau) {
    return boundary_g1(s, tau) / pow4(1.0 + 3.0 * s) +
           boundary_g2(s, tau) / pow4(1.0 - 3.0 * s) - 0.25;
}

}  // namespace

std::optional<double> tau_double_star(double s) {
    if (!(s > 0.2 && s < 1.0 / 3.0))
        throw std::domain_error("tau_double_star: requires s in (1/5, 1/3)");
    const double lo = tau_star(s);
    const double hi = std::pow(5.0 * s, 0.25);
    if (lo <= 1.0) return std::nullopt;  // whole curve inside for tau > 1
    const double elo = curve_ellipse_excess(s, lo);
    const double ehi = curve_ellipse_excess(s, hi);
    if (elo <= 0.0) return std::nullopt;  // peak does not leave the ellipse
    if (ehi >= 0.0) throw NumericalError("tau_double_star: right endpoint not inside the ellipse");
    double a = lo, b = hi;
    while (b - a > kBisectionTol) {
        const double m = 0.5 * (a + b);
        if (curve_ellipse_excess(s, m) > 0.0)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

std::vector<BoundaryCurvePoint> boundary_curve(double s, int n) {
    if (!(s > 0.2 && s < 1.0 / 3.0))
        throw std::domain_error("boundary_curve: requires s in (1/5, 1/3)");
    if (n < 2) throw std::invalid_argument("boundary_curve: requires n >= 2");
    const double lo = tau_star(s);
    const double hi = std::pow(5.0 * s, 0.25);
    std::vector<BoundaryCurvePoint> out;
    out.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double tau = lo + (hi - lo) * k / (n - 1);
        const double v1 = std::max(0.0, boundary_g1(s, tau));
        const double v2 = std::max(0.0, boundary_g2(s, tau));
        BoundaryCurvePoint pt;
        pt.s = s;
        pt.tau = tau;
        pt.g1 = v1;
        pt.g2 = v2;
        pt.point = LambdaPoint{std::sqrt(v1) / (1.0 + 3.0 * s), std::sqrt(v2) / (1.0 - 3.0 * s), s};
        out.push_back(pt);
    }
    return out;
}

bool in_set_A(const LambdaPoint& x) {
    if (!(x.x3 > 0.2 && x.x3 < 1.0 / 3.0)) return false;
    const double s = x.x3;
    const double p2 = x.x1 * (1.0 + 3.0 * s) * x.x1 * (1.0 + 3.0 * s);
    const double q2 = x.x2 * (1.0 - 3.0 * s) * x.x2 * (1.0 - 3.0 * s);
    const double lo = tau_star(s);
    const double hi = std::pow(5.0 * s, 0.25);
    // g2 decreases from g2(tau*) to 0 on [tau*, (5s)^{1/4}]; invert it.
    if (q2 > boundary_g2(s, lo)) return false;
    double tau;
    if (q2 == 0.0) {
        tau = hi;
    } else {
        double a = lo, b = hi;
        while (b - a > kBisectionTol) {
            const double m = 0.5 * (a + b);
            if (boundary_g2(s, m) > q2)
                a = m;
            else
                b = m;
        }
        tau = 0.5 * (a + b);
    }
    return p2 >= boundary_g1(s, tau);
}

ClassificationResult classify(const CubicMap& f, const ClassifyOptions& opts) {
    if (!(opts.tolerance > 0.0))
        throw std::invalid_argument("classify: tolerance must be positive");

    const MomentData m = moments(f);
    const double p = m.m1.real();
    const double q = m.m1.imag();
    if (!(m.m2 > 0.0 && m.m2 < 1.0 / 3.0))
        throw std::domain_error("classify: m2 must lie in (0, 1/3)");

    // The criteria are stated for f'(0) = 1; rescale to the a1 = 1
    // representative of the same trajectory.
    const CubicMap rep = f.a1 == 1.0 ? f : coefficients_from_moments(p, q, m.m2, 1.0);

    ClassificationResult res{ClassifyTag::kNotUnivalent, {}, {}, std::nullopt, opts.tolerance};
    res.local_verdict = in_local_region(lambda_map(rep));
    res.sup = sup_h(p, q, m.m2);

    if (res.local_verdict.inconclusive) {
        res.tag = ClassifyTag::kBoundaryInconclusive;
        return res;
    }
    if (!res.local_verdict.member) {
        res.tag = ClassifyTag::kNotUnivalent;
        return res;
    }

    const double S = res.sup.sup_value;
    if (S < 0.25 - opts.tolerance) {
        res.tag = ClassifyTag::kC1;
    } else if (std::abs(S - 0.25) <= opts.tolerance) {
        // A genuine C2 touch happens at arg_tau > 1; if already at the
        // boundary at tau = 1 the verdict is indistinguishable from it.
        const double h1 = h_value(p, q, m.m2, 1.0);
        res.tag = h1 < 0.25 - opts.tolerance ? ClassifyTag::kC2 : ClassifyTag::kBoundaryInconclusive;
    } else {
        UnivalenceOptions uopts;
        uopts.n_samples = opts.univalence_samples;
        res.univalence_verdict = univalence_oracle(rep, uopts);
        if (res.univalence_verdict->inconclusive)
            res.tag = ClassifyTag::kBoundaryInconclusive;
        else
            res.tag = res.univalence_verdict->member ? ClassifyTag::kC3 : ClassifyTag::kNotUnivalent;
    }
    return res;
}

ClassificationResult classify(const CubicMap& f, double tolerance) {
    ClassifyOptions opts;
    opts.tolerance = tolerance;
    return classify(f, opts);
}

}  // namespace pgcubic
