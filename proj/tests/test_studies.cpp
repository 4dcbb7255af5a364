#include <doctest.h>

#include <cmath>

#include "clusterem/effective.hpp"
#include "clusterem/io.hpp"
#include "clusterem/studies.hpp"

using namespace clusterem;

namespace {

const double kPi3 = kPi * kPi * kPi;

ConvergenceConfig small_convergence() {
    ConvergenceConfig c;
    c.domain = DomainShape::unit_box();
    c.a_values = {0.04, 0.02};
    c.h = 0.9;
    c.eta0 = 1;
    c.c0 = 1;
    c.cr = 2;
    c.lambda_nB = 0.2;
    c.grid_n = 8;
    return c;
}

}  // namespace

TEST_CASE("regime map") {
    RegimeMapConfig c;
    c.xi_min = 0;
    c.xi_max = 20;
    c.xi_steps = 41;
    c.k = 1;
    c.delta_star = 0.05;
    c.domain = DomainShape::ball(Point::Zero(), 1.0);
    const RegimeMapReport r = run_regime_map(c);
    bool saw_lower = false, saw_upper = false;
    for (const auto& row : r.rows) {
        if (row.sign == Sign::Minus) {
            if (row.xi == kPi3 / 8) {
                saw_lower = true;
                CHECK(row.regime == Regime::Degenerate);
            }
            if (row.xi > 0 && row.xi < kPi3 / 8) CHECK(row.regime == Regime::DielectricPositive);
            if (row.xi > kPi3 / 8) CHECK(row.regime == Regime::PlasmonicNegative);
        } else {
            if (row.xi == kPi3 / 4) {
                saw_upper = true;
                CHECK(row.regime == Regime::Degenerate);
                CHECK(std::isnan(row.mu));
            }
            if (row.xi > 0 && row.xi < kPi3 / 4) CHECK(row.mu > 0);
            if (row.xi > kPi3 / 4) CHECK(row.mu < 0);
        }
        CHECK(row.in_coercivity_window == r.window.contains(row.xi));
    }
    CHECK(saw_lower);
    CHECK(saw_upper);
    CHECK(r.rows.size() == 2 * 43);
    // determinism
    const Json a = to_json(regime_report(c, r)), b = to_json(regime_report(c, run_regime_map(c)));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("convergence study on a small grid") {
    const ConvergenceConfig c = small_convergence();
    const ConvergenceReport r = run_convergence(c);
    REQUIRE(r.rows.size() == 2);
    for (const auto& row : r.rows) {
        CHECK(row.status == "ok");
        CHECK(row.fl_residual <= 1e-10);
        CHECK(row.lse_residual <= 1e-8);
        CHECK(row.sup_error > 0);
        CHECK(row.count == generate_cluster(c.domain, row.d).size());
    }
    CHECK(r.rows[0].count < r.rows[1].count);
    CHECK(r.strictly_decreasing == (r.rows[1].sup_error < r.rows[0].sup_error));
    CHECK(r.directions.size() == 26);
    const Json a = to_json(convergence_report(c, r)), b = to_json(convergence_report(c, run_convergence(c)));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("doubling the direction grid barely moves the sup error") {
    ConvergenceConfig c = small_convergence();
    const ConvergenceReport coarse = run_convergence(c);
    c.direction_level = 2;
    const ConvergenceReport fine = run_convergence(c);
    REQUIRE(fine.directions.size() == 98);
    for (std::size_t i = 0; i < coarse.rows.size(); ++i)
        CHECK(std::abs(fine.rows[i].sup_error - coarse.rows[i].sup_error) < 0.1 * coarse.rows[i].sup_error);
}

TEST_CASE("counting study slopes") {
    CountingConfig c;
    c.domain = DomainShape::unit_box();
    c.boundary_domain = DomainShape::ball(Point::Zero(), std::cbrt(3 / (4 * kPi)));
    c.interior_pitch_inverses = {4, 5, 6, 7, 8, 9, 10, 11, 12};
    c.boundary_pitch_inverses = {6, 8, 10};
    c.kappas = {1, 4};
    const CountingReport r = run_counting(c);
    REQUIRE(r.slopes.size() == 2);
    CHECK(r.slopes[0].second == doctest::Approx(-3).epsilon(0.1));
    CHECK(r.slopes[1].second == doctest::Approx(-4).epsilon(0.075));
    CHECK(r.sums.size() == 2 * 9);
    CHECK(r.boundary.size() == 3);
    for (const auto& b : r.boundary) CHECK(b.value > 0);
    MESSAGE("boundary slope " << r.boundary_slope);
}

TEST_CASE("resonance scan on a coarse ball") {
    ResonanceConfig c;
    c.grid_n = 12;
    c.eta0 = 1e10;
    c.lambda_nB = 0.2;
    c.beta_values = {0.003, 0.01, 0.03, 0.1, -0.003, -0.01, -0.03, -0.1};
    c.off_resonance_fractions = {0.25, 0.5};
    const ResonanceReport r = run_resonance(c);
    CHECK(r.lambda_target > 1.0 / 3.0);
    CHECK(r.dispersion_root == doctest::Approx(dispersion_xi(r.lambda_target)));
    CHECK(r.slope == doctest::Approx(-1).epsilon(0.25));
    CHECK(r.peak_alignment_deg <= 10);
    CHECK(r.sign_asymmetry <= 0.2);
    REQUIRE(r.rows.size() == 10);
    for (const auto& row : r.rows) {
        CHECK(row.status == "ok");
        CHECK(row.residual <= 1e-8);
        if (row.off_resonance) {
            CHECK(row.ratio >= 0.5);
            CHECK(row.ratio <= 2);
            CHECK(row.xi < kPi3 / 8);
        } else {
            CHECK(row.xi == doctest::Approx(detuned_xi(r.lambda_target, row.beta)));
        }
    }
}

TEST_CASE("spectrum study on a coarse ball") {
    SpectrumConfig c;
    c.grid_n = 12;
    const SpectrumStudy s = run_spectrum(c);
    CHECK(std::abs(s.near_third - 1.0 / 3.0) <= 0.03);
    CHECK(s.lambda_target > 1.0 / 3.0);
    CHECK(s.n_plus_nprime == doctest::Approx(8.0 / 15.0).epsilon(0.02));
    // the surrogate points along theta x p
    const Point dir = c.wave.theta.cross(c.wave.p);
    const Dyadic Q = s.q_surrogate;
    CHECK((Q - (dir.cast<cplx>() * dir.cast<cplx>().transpose()) * Q(1, 1)).norm() <= 1e-8 * Q.norm());
    CHECK(Q(1, 1).real() > 0);
}
