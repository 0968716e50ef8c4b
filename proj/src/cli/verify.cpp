#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <vector>

#include "pgcubic/cli/commands.hpp"
#include "pgcubic/evolution.hpp"

namespace pgcubic::cli {

namespace {

struct SuiteResult {
    std::string name;
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

// Random map with Lambda point strictly inside the locally-univalent ellipse.
CubicMap random_inside_ellipse(std::mt19937_64& rng, double a3) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = 0.9 * std::sqrt(unit(rng));
    const double phi = 2.0 * M_PI * unit(rng);
    return CubicMap(1.0, Complex(0.5 * (1.0 + 3.0 * a3) * r * std::cos(phi),
                                 0.5 * (1.0 - 3.0 * a3) * r * std::sin(phi)),
                    a3);
}

// Quarter identity of the boundary functions at tau = 1.
SuiteResult suite_quarter_identity() {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double s = 0.201 + (0.333 - 0.201) * k / 199.0;
        const double val = boundary_g1(s, 1.0) / std::pow(1.0 + 3.0 * s, 4) +
                           boundary_g2(s, 1.0) / std::pow(1.0 - 3.0 * s, 4);
        worst = std::max(worst, std::abs(val - 0.25));
    }
    return {"quarter-identity", worst < 1e-12, "max|err|=" + sci(worst)};
}

SuiteResult suite_round_trip(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::uniform_real_distribution<double> s(1e-3, 0.333);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const CubicMap f(1.0, {c(rng), c(rng)}, s(rng));
        const auto m = moments(f);
        const auto g = coefficients_from_moments(m.m1.real(), m.m1.imag(), m.m2, 1.0);
        worst = std::max({worst, std::abs(g.a1 - f.a1), std::abs(g.a2 - f.a2),
                          std::abs(g.a3 - f.a3)});
    }
    return {"round-trip", worst < 1e-12, "max|err|=" + sci(worst)};
}

SuiteResult suite_oracle_agreement(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::uniform_real_distribution<double> s(1e-4, 0.3333);
    int disagreements = 0, in_band = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const CubicMap f(1.0, {c(rng), c(rng)}, s(rng));
        const auto ell = in_local_region(lambda_map(f));
        const auto ora = local_univalence_oracle(f);
        if (std::abs(ell.margin) <= 1e-6 || std::abs(ora.margin) <= 1e-6) {
            ++in_band;
            continue;
        }
        if (ell.member != ora.member) ++disagreements;
    }
    return {"oracle-agreement", disagreements == 0 && in_band < n / 1000,
            "disagreements=" + std::to_string(disagreements) + " band=" + std::to_string(in_band)};
}

SuiteResult suite_conservation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> s(0.01, 0.3);
    std::uniform_real_distribution<double> ts(0.0, 100.0);
    double worst1 = 0.0, worst2 = 0.0;
    for (int i = 0; i < 100; ++i) {
        const CubicMap f0 = random_inside_ellipse(rng, s(rng));
        const auto m0 = moments(f0);
        const auto tr = trajectory_of(f0);
        for (int k = 0; k < 20; ++k) {
            const auto mt = moments(evolve_on(tr, ts(rng)));
            worst1 = std::max(worst1, std::abs(mt.m1 - m0.m1));
            worst2 = std::max(worst2, std::abs(mt.m2 - m0.m2));
        }
    }
    return {"conservation", worst1 < 1e-11 && worst2 < 1e-12,
            "max|dM1|=" + sci(worst1) + " max|dM2|=" + sci(worst2)};
}

SuiteResult suite_pg_residual(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> s(0.02, 0.3);
    std::uniform_real_distribution<double> taus(1.0, 3.0);
    double worst = 0.0;
    int done = 0;
    while (done < 20) {
        const auto tr = trajectory_of(random_inside_ellipse(rng, s(rng)));
        if (sup_h(tr.p, tr.q, tr.m2).sup_value > 0.245) continue;
        ++done;
        const double tau = taus(rng);
        const double eps = 1e-6;
        const auto fp = coefficients_from_moments(tr.p, tr.q, tr.m2, tau + eps);
        const auto fm = coefficients_from_moments(tr.p, tr.q, tr.m2, tau - eps);
        const auto fc = coefficients_from_moments(tr.p, tr.q, tr.m2, tau);
        const double q_ref = injection_rate(tr, tau);
        for (int k = 0; k < 512; ++k) {
            const Complex z = std::polar(1.0, 2.0 * M_PI * k / 512);
            const Complex f_tau = (fp.value(z) - fm.value(z)) / (2.0 * eps);
            const double v = std::real(f_tau * std::conj(fc.derivative(z) * z));
            worst = std::max(worst, std::abs(v / q_ref - 1.0));
        }
    }
    return {"pg-residual", worst < 1e-6, "max|res|=" + sci(worst)};
}

SuiteResult suite_symmetry(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.2, 1.2);
    std::uniform_real_distribution<double> s(0.01, 0.33);
    bool exact = true;
    for (int i = 0; i < 2000; ++i) {
        const double p = c(rng), q = c(rng), m2 = s(rng);
        const auto base = sup_h(p, q, m2);
        exact = exact && sup_h(-p, q, m2).sup_value == base.sup_value &&
                sup_h(p, -q, m2).sup_value == base.sup_value &&
                sup_h(-p, -q, m2).sup_value == base.sup_value;
        const double x1 = c(rng), x2 = c(rng);
        const auto v = in_local_region({x1, x2, m2});
        exact = exact && in_local_region({-x1, x2, m2}).margin == v.margin &&
                in_local_region({x1, -x2, m2}).margin == v.margin;
    }
    return {"symmetry", exact, exact ? "exact under sign flips" : "sign-flip mismatch"};
}

SuiteResult suite_monotonicity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.2, 1.2);
    std::uniform_real_distribution<double> s(0.01, 0.33);
    std::uniform_real_distribution<double> grow(1.0, 2.0);
    int checked = 0, violations = 0;
    while (checked < 500) {
        const double re = c(rng), im = c(rng), m2 = s(rng);
        const auto mf = moments(CubicMap(1.0, {re, im}, m2));
        const auto sf = sup_h(mf.m1.real(), mf.m1.imag(), mf.m2);
        if (sf.sup_value < 0.25 - 1e-7) continue;
        ++checked;
        const auto mg = moments(CubicMap(1.0, {re * grow(rng), im * grow(rng)}, m2));
        const auto sg = sup_h(mg.m1.real(), mg.m1.imag(), mg.m2);
        if (sg.sup_value < sf.sup_value - 1e-12) ++violations;
    }
    return {"monotonicity", violations == 0, "violations=" + std::to_string(violations)};
}

}  // namespace

int cmd_verify(const RunConfig& config, std::ostream& out) {
    std::mt19937_64 rng(config.seed);
    std::vector<SuiteResult> results;
    results.push_back(suite_quarter_identity());
    results.push_back(suite_round_trip(rng));
    results.push_back(suite_oracle_agreement(rng));
    results.push_back(suite_conservation(rng));
    results.push_back(suite_pg_residual(rng));
    results.push_back(suite_symmetry(rng));
    results.push_back(suite_monotonicity(rng));

    bool all_pass = true;
    out << "suite              status  detail\n";
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        out << r.name << std::string(r.name.size() < 19 ? 19 - r.name.size() : 1, ' ')
            << (r.pass ? "PASS" : "FAIL") << "    " << r.detail << "\n";
    }
    out << (all_pass ? "verify: all suites passed\n" : "verify: FAILURES present\n");
    return all_pass ? 0 : 1;
}

}  // namespace pgcubic::cli
