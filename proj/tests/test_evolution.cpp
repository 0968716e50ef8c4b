#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pgcubic/evolution.hpp"

using pgcubic::Complex;
using pgcubic::CubicMap;
using pgcubic::CuspOrder;
using pgcubic::Trajectory;

namespace {

const double kCriticalP = 2.0 / std::pow(1.25, 1.25);  // sup h = 1/4 at m2 = 1/4

CubicMap map_at(const Trajectory& tr, double tau) {
    return pgcubic::coefficients_from_moments(tr.p, tr.q, tr.m2, tau);
}

// Random map with Lambda point strictly inside the locally-univalent ellipse.
CubicMap random_inside_ellipse(std::mt19937_64& rng, double a3) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = 0.9 * std::sqrt(unit(rng));
    const double phi = 2.0 * M_PI * unit(rng);
    const double x1 = 0.5 * (1.0 + 3.0 * a3) * r * std::cos(phi);
    const double x2 = 0.5 * (1.0 - 3.0 * a3) * r * std::sin(phi);
    return CubicMap(1.0, Complex(x1, x2), a3);
}

}  // namespace

TEST_CASE("trajectory_of extracts the conserved labels") {
    const auto tr = pgcubic::trajectory_of(CubicMap(1.0, 0.2, 0.1));
    CHECK(tr.p == doctest::Approx(0.26).epsilon(1e-14));
    CHECK(tr.q == 0.0);
    CHECK(tr.m2 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(tr.tau0 == 1.0);
    CHECK(tr.m0_initial == doctest::Approx(1.11).epsilon(1e-14));
}

TEST_CASE("m0_of_tau: worked values and tail") {
    const Trajectory tr{0.0, 0.0, 0.1, 1.0, 1.03};
    CHECK(pgcubic::m0_of_tau(tr, 1.0) == doctest::Approx(1.03).epsilon(1e-15));
    CHECK(pgcubic::m0_of_tau(tr, 2.0) == doctest::Approx(4.00046875).epsilon(1e-15));

    const auto tr2 = pgcubic::trajectory_of(CubicMap(1.0, 0.2, 0.1));
    CHECK(pgcubic::m0_of_tau(tr2, 1.0) == doctest::Approx(1.11).epsilon(1e-14));
    // a2, a3 decay like tau^-2, tau^-3: M0 - tau^2 -> 0.
    CHECK(std::abs(pgcubic::m0_of_tau(tr2, 100.0) - 1e4) < 1e-6);
    CHECK_THROWS_AS(pgcubic::m0_of_tau(tr2, 0.5), std::domain_error);
}

TEST_CASE("time_of_tau: area law") {
    const Trajectory tr{0.0, 0.0, 0.1, 1.0, 1.03};
    CHECK(pgcubic::time_of_tau(tr, 1.0) == 0.0);
    CHECK(pgcubic::time_of_tau(tr, 2.0) == doctest::Approx(1.485234375).epsilon(1e-14));
    CHECK_THROWS_AS(pgcubic::time_of_tau(tr, 0.9), std::domain_error);

    // dt/dtau > 0 along a sampled grid.
    const auto tr2 = pgcubic::trajectory_of(CubicMap(1.0, Complex(0.2, -0.1), 0.15));
    double prev = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double t = pgcubic::time_of_tau(tr2, 1.0 + 0.05 * k);
        CHECK(t > prev);
        prev = t;
    }
}

TEST_CASE("tau_of_time: inverse of time_of_tau") {
    const Trajectory tr{0.0, 0.0, 0.1, 1.0, 1.03};
    CHECK(pgcubic::tau_of_time(tr, 0.0) == 1.0);
    CHECK(pgcubic::tau_of_time(tr, 1.485234375) == doctest::Approx(2.0).epsilon(1e-10));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> s(0.01, 0.32);
    std::uniform_real_distribution<double> taus(1.0, 1000.0);
    int done = 0;
    while (done < 1000) {
        const auto trj = pgcubic::trajectory_of(random_inside_ellipse(rng, s(rng)));
        // t(tau) is only invertible where the solution stays locally
        // univalent; restrict to globally solvable label sets.
        if (pgcubic::sup_h(trj.p, trj.q, trj.m2).sup_value >= 0.25 - 1e-9) continue;
        ++done;
        const double tau = taus(rng);
        const double t = pgcubic::time_of_tau(trj, tau);
        CHECK(pgcubic::tau_of_time(trj, t) == doctest::Approx(tau).epsilon(1e-10));
    }
}

TEST_CASE("tau_of_time: invertible through a tangential C2 touch") {
    const auto f0 = pgcubic::coefficients_from_moments(kCriticalP, 0.0, 0.25, 1.0);
    const auto tr = pgcubic::trajectory_of(f0);
    for (const double tau : {1.02, 1.2, 3.0}) {
        const double t = pgcubic::time_of_tau(tr, tau);
        CHECK(pgcubic::tau_of_time(tr, t) == doctest::Approx(tau).epsilon(1e-10));
    }
    // At the touch itself Q has a double zero, so t(tau) is cubically flat
    // and the inverse is only conditioned to about ulp(M0)^(1/3).
    const double tau_b = 1.0573712634405641;
    const double t_b = pgcubic::time_of_tau(tr, tau_b);
    CHECK(std::abs(pgcubic::tau_of_time(tr, t_b) - tau_b) < 1e-4);
}

TEST_CASE("evolve: identity at t = 0 and the worked snapshot") {
    const CubicMap f0(1.0, 0.0, 0.1);
    const auto r0 = pgcubic::evolve(f0, 0.0);
    CHECK(r0.map.a1 == 1.0);
    CHECK(r0.map.a3 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r0.valid);

    const auto r = pgcubic::evolve(f0, 1.485234375);
    CHECK(r.map.a1 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(r.map.a2) < 1e-14);
    CHECK(r.map.a3 == doctest::Approx(0.0125).epsilon(1e-10));
}

TEST_CASE("evolve: moment conservation along random global trajectories") {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> s(0.01, 0.3);
    std::uniform_real_distribution<double> ts(0.0, 50.0);
    for (int i = 0; i < 300; ++i) {
        const CubicMap f0 = random_inside_ellipse(rng, s(rng));
        const auto m0 = pgcubic::moments(f0);
        const auto tr = pgcubic::trajectory_of(f0);
        const double t = ts(rng);
        const auto ft = pgcubic::evolve_on(tr, t);
        const auto mt = pgcubic::moments(ft);
        CHECK(std::abs(mt.m1 - m0.m1) < 1e-11);
        CHECK(std::abs(mt.m2 - m0.m2) < 1e-12);
        CHECK(std::abs(mt.m0 - (m0.m0 + 2.0 * t)) < 1e-9);  // linear area law
    }
}

TEST_CASE("evolve: gate rejects non-univalent data") {
    CHECK_THROWS_AS(pgcubic::evolve(CubicMap(1.0, 0.95, 0.25), 1.0),
                    pgcubic::ClassificationError);
    CHECK_THROWS_AS(pgcubic::evolve(CubicMap(2.0, 0.0, 0.0125), 1.0), std::invalid_argument);
}

TEST_CASE("injection_rate: radial case and finite-difference cross-check") {
    const Trajectory tr{0.0, 0.0, 0.2, 1.0, 1.12};
    for (const double tau : {1.0, 1.5, 2.0, 5.0}) {
        const double expected = tau - 9.0 * 0.04 / std::pow(tau, 7);
        CHECK(pgcubic::injection_rate(tr, tau) == doctest::Approx(expected).epsilon(1e-13));
    }

    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> s(0.01, 0.32);
    std::uniform_real_distribution<double> taus(1.01, 4.0);
    int done = 0;
    while (done < 500) {
        const auto trj = pgcubic::trajectory_of(random_inside_ellipse(rng, s(rng)));
        if (pgcubic::sup_h(trj.p, trj.q, trj.m2).sup_value >= 0.25 - 1e-9) continue;
        ++done;
        const double tau = taus(rng);
        const double eps = 1e-6;
        const double fd = (pgcubic::m0_of_tau(trj, tau + eps) - pgcubic::m0_of_tau(trj, tau - eps)) /
                          (4.0 * eps);
        const double q = pgcubic::injection_rate(trj, tau);
        CHECK(q == doctest::Approx(fd).epsilon(1e-7));
        CHECK(q > 0.0);  // all sampled trajectories stay inside the ellipse
    }
}

TEST_CASE("boundary identity: Re[F_tau conj(F' zeta)] is constant in theta") {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> s(0.02, 0.3);
    std::uniform_real_distribution<double> taus(1.0, 3.0);
    int done = 0;
    while (done < 20) {
        const auto tr = pgcubic::trajectory_of(random_inside_ellipse(rng, s(rng)));
        if (pgcubic::sup_h(tr.p, tr.q, tr.m2).sup_value >= 0.25 - 1e-9) continue;
        ++done;
        const double tau = taus(rng);
        const double eps = 1e-6;
        const auto fp = map_at(tr, tau + eps);
        const auto fm = map_at(tr, tau - eps);
        const auto fc = map_at(tr, tau);
        const double q_ref = pgcubic::injection_rate(tr, tau);
        double mean = 0.0, var = 0.0, residual = 0.0;
        const int n = 512;
        std::vector<double> vals(n);
        for (int k = 0; k < n; ++k) {
            const Complex z = std::polar(1.0, 2.0 * M_PI * k / n);
            const Complex f_tau = (fp.value(z) - fm.value(z)) / (2.0 * eps);
            vals[k] = std::real(f_tau * std::conj(fc.derivative(z) * z));
            mean += vals[k];
        }
        mean /= n;
        for (int k = 0; k < n; ++k) {
            var += (vals[k] - mean) * (vals[k] - mean);
            // Chain rule: f_t = F_tau / Q, so Re[f_t conj(f' zeta)] = 1.
            residual = std::max(residual, std::abs(vals[k] / q_ref - 1.0));
        }
        var /= n;
        CHECK(var < 1e-12);
        CHECK(mean == doctest::Approx(q_ref).epsilon(1e-9));
        CHECK(residual < 1e-6);
    }
}

TEST_CASE("blow_up: C1 data does not blow up") {
    const auto rep = pgcubic::blow_up(CubicMap(1.0, 0.0, 0.1));
    CHECK_FALSE(rep.blows_up);
    CHECK_FALSE(rep.continuable);
    CHECK_FALSE(rep.tau_blow.has_value());
}

TEST_CASE("blow_up: C2 tangential touch with a 5/2 cusp") {
    const auto f0 = pgcubic::coefficients_from_moments(kCriticalP, 0.0, 0.25, 1.0);
    const auto rep = pgcubic::blow_up(f0);
    REQUIRE(rep.blows_up);
    CHECK(rep.continuable);
    CHECK(*rep.tau_blow == doctest::Approx(1.0573712634405641).epsilon(1e-6));
    CHECK(*rep.t_star > 0.0);
    REQUIRE(rep.zeta0.has_value());
    CHECK(std::abs(*rep.zeta0 - Complex(-1.0, 0.0)) < 1e-6);
    CHECK(std::abs(std::abs(*rep.zeta0) - 1.0) < 1e-8);
    REQUIRE(rep.cusp.has_value());
    CHECK(rep.cusp->declared_order == CuspOrder::kFiveHalf);
    CHECK(rep.cusp->fit_residual < 0.05);
    CHECK(rep.cusp->fitted_exponent == doctest::Approx(2.5).epsilon(0.06));
}

TEST_CASE("blow_up: C3 transversal exit with a generic 3/2 cusp") {
    const CubicMap f0(1.0, 0.8655, 0.25);
    const auto rep = pgcubic::blow_up(f0);
    REQUIRE(rep.blows_up);
    CHECK_FALSE(rep.continuable);
    CHECK(*rep.tau_blow == doctest::Approx(1.0407161780825651).epsilon(1e-8));
    REQUIRE(rep.zeta0.has_value());
    CHECK(std::abs(*rep.zeta0 - Complex(-1.0, 0.0)) < 1e-6);
    REQUIRE(rep.cusp.has_value());
    CHECK(rep.cusp->declared_order == CuspOrder::kThreeHalf);
    CHECK(rep.cusp->fitted_exponent == doctest::Approx(1.5).epsilon(0.06));
}

TEST_CASE("cusp_report: explicit critical-circle map has a 3/2 cusp") {
    const CubicMap f(1.0, 2.0 / 3.0, 1.0 / 9.0);
    const auto rep = pgcubic::cusp_report(f, Complex(-1.0, 0.0));
    CHECK(rep.declared_order == CuspOrder::kThreeHalf);
    CHECK(rep.fitted_exponent == doctest::Approx(1.5).epsilon(0.05));
    CHECK(rep.fit_residual < 0.05);
}

TEST_CASE("cusp_report: precondition checks") {
    const CubicMap f(1.0, 2.0 / 3.0, 1.0 / 9.0);
    CHECK_THROWS_AS(pgcubic::cusp_report(f, Complex(-0.5, 0.0)), pgcubic::PreconditionError);
    // On the circle but f' does not vanish there.
    CHECK_THROWS_AS(pgcubic::cusp_report(f, Complex(1.0, 0.0)), pgcubic::PreconditionError);
}

TEST_CASE("continue_after_blowup: C2 re-enters the locally univalent region") {
    const auto f0 = pgcubic::coefficients_from_moments(kCriticalP, 0.0, 0.25, 1.0);
    const auto rep = pgcubic::blow_up(f0);
    const auto tr = pgcubic::trajectory_of(f0);

    const double t_after = pgcubic::time_of_tau(tr, *rep.tau_blow + 0.1);
    const auto cont = pgcubic::continue_after_blowup(f0, t_after);
    CHECK(pgcubic::univalence_oracle(cont, 4096).member);

    const double t_just = *rep.t_star + 1e-4;
    const auto near = pgcubic::continue_after_blowup(f0, t_just);
    CHECK(pgcubic::local_univalence_oracle(near).margin > 0.0);

    // t -> infinity: the map approaches the expanding disk.
    const double t_far = pgcubic::time_of_tau(tr, 50.0);
    const auto far = pgcubic::continue_after_blowup(f0, t_far);
    const auto x = pgcubic::lambda_map(far);
    CHECK(std::abs(x.x1) < 1e-3);
    CHECK(std::abs(x.x3) < 1e-4);

    CHECK_THROWS_AS(pgcubic::continue_after_blowup(f0, *rep.t_star / 2.0), std::domain_error);
    CHECK_THROWS_AS(pgcubic::continue_after_blowup(CubicMap(1.0, 0.0, 0.1), 1.0),
                    pgcubic::ClassificationError);
    CHECK_THROWS_AS(pgcubic::continue_after_blowup(CubicMap(1.0, 0.8655, 0.25), 1.0),
                    pgcubic::ClassificationError);
}

TEST_CASE("trajectory_scan: C1 margins stay positive") {
    const auto rows = pgcubic::trajectory_scan(CubicMap(1.0, 0.2, 0.1), 64);
    REQUIRE(rows.size() == 64);
    CHECK(rows.front().t == 0.0);
    CHECK(rows.front().tau == 1.0);
    CHECK(rows.front().point.x1 == doctest::Approx(0.2).epsilon(1e-12));
    for (const auto& r : rows) {
        CHECK(r.ellipse_margin > 0.0);
        CHECK(r.valid);
    }
}

TEST_CASE("trajectory_scan: C2 touches, C3 crosses twice") {
    const auto f_c2 = pgcubic::coefficients_from_moments(kCriticalP, 0.0, 0.25, 1.0);
    const auto rows2 = pgcubic::trajectory_scan(f_c2, 4001);
    double min_margin = 1.0;
    for (const auto& r : rows2) {
        min_margin = std::min(min_margin, r.ellipse_margin);
        CHECK(r.ellipse_margin > -1e-6);
        CHECK(r.valid);
    }
    CHECK(std::abs(min_margin) < 1e-5);

    const auto rows3 = pgcubic::trajectory_scan(CubicMap(1.0, 0.8655, 0.25), 4001);
    int sign_changes = 0;
    for (size_t i = 1; i < rows3.size(); ++i)
        if ((rows3[i].ellipse_margin > 0.0) != (rows3[i - 1].ellipse_margin > 0.0)) ++sign_changes;
    CHECK(sign_changes == 2);
    CHECK(rows3.back().ellipse_margin > 0.0);
    // Samples past the blow-up parameter are flagged invalid.
    bool seen_invalid = false;
    for (const auto& r : rows3) {
        if (r.tau >= 1.0407161780825651) {
            CHECK_FALSE(r.valid);
            seen_invalid = true;
        } else {
            CHECK(r.valid);
        }
    }
    CHECK(seen_invalid);
}

TEST_CASE("blow_up: impossible for locally univalent data with m2 <= 1/5") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> s(0.01, 0.2);
    for (int i = 0; i < 50; ++i) {
        const CubicMap f = random_inside_ellipse(rng, s(rng));
        CHECK_FALSE(pgcubic::blow_up(f).blows_up);
    }
}

TEST_CASE("blow_up consistency: blows_up iff not C1") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> c(-0.7, 0.7);
    std::uniform_real_distribution<double> s(0.02, 0.32);
    int checked = 0;
    while (checked < 60) {
        const CubicMap f(1.0, Complex(c(rng), c(rng)), s(rng));
        const auto cls = pgcubic::classify(f);
        if (cls.tag != pgcubic::ClassifyTag::kC1 && cls.tag != pgcubic::ClassifyTag::kC2 &&
            cls.tag != pgcubic::ClassifyTag::kC3)
            continue;
        ++checked;
        const auto rep = pgcubic::blow_up(f);
        CHECK(rep.blows_up == (cls.tag != pgcubic::ClassifyTag::kC1));
        if (rep.blows_up) {
            const auto m = pgcubic::moments(f);
            CHECK(std::abs(pgcubic::h_value(m.m1.real(), m.m1.imag(), m.m2, *rep.tau_blow) - 0.25) <
                  1e-8);
        }
    }
}
