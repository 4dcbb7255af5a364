#include <doctest.h>

#include <cmath>

#include "clusterem/geometry.hpp"

using namespace clusterem;

TEST_CASE("derive_scales relations") {
    const ScaleSet s = derive_scales(0.01, 0.9, 2.0, 1.0, Sign::Plus, 2.0, 0.1);
    CHECK(s.eta == doctest::Approx(2e4).epsilon(1e-12));
    CHECK(std::abs(s.d * s.d * s.d - 8.0 * std::pow(0.01, 2.1)) <= 1e-12 * s.d * s.d * s.d);
    CHECK(std::abs(s.k * s.k - (1 - std::pow(0.01, 0.9)) / 0.2) <= 1e-12 * s.k * s.k);
    // 1 - k^2 eta a^2 lambda = +c0 a^h on the upper branch
    CHECK(std::abs(1 - s.k * s.k * s.eta * s.a * s.a * s.lambda_nB - std::pow(0.01, 0.9)) < 1e-12);
    const ScaleSet m = derive_scales(0.01, 0.9, 2.0, 1.0, Sign::Minus, 2.0, 0.1);
    CHECK(std::abs(1 - m.k * m.k * m.eta * m.a * m.a * m.lambda_nB + std::pow(0.01, 0.9)) < 1e-12);
}

TEST_CASE("pitch example and a->0 limit") {
    // h = 1 is outside the admissible range, so evaluate the pitch formula directly
    CHECK(2.0 * std::pow(0.01, 2.0 / 3.0) == doctest::Approx(0.092832).epsilon(1e-5));
    const ScaleSet s = derive_scales(1e-12, 0.95, 3.0, 1.0, Sign::Plus, 1.0, 0.25);
    CHECK(s.k * s.k == doctest::Approx(1.0 / 0.75).epsilon(1e-10));
}

TEST_CASE("derive_scales rejects bad regimes") {
    CHECK_THROWS_AS(derive_scales(0.01, 0.5, 1, 1, Sign::Plus, 2, 0.1), InfeasibleError);
    CHECK_THROWS_AS(derive_scales(0.01, 1.0, 1, 1, Sign::Plus, 2, 0.1), InfeasibleError);
    CHECK_THROWS_AS(derive_scales(0.5, 0.9, 1, 2, Sign::Plus, 2, 0.1), InfeasibleError);  // 1 - c0 a^h < 0
    CHECK_NOTHROW(derive_scales(0.5, 0.9, 1, 2, Sign::Minus, 2, 0.1));
}

TEST_CASE("box clusters") {
    const DomainShape box = DomainShape::unit_box();
    const Cluster c8 = generate_cluster(box, 0.5);
    REQUIRE(c8.size() == 8);
    for (const Point& z : c8.centers) CHECK(((z - Point::Constant(0.5)).cwiseAbs() - Point::Constant(0.25)).norm() < 1e-15);
    const Cluster c1 = generate_cluster(box, 1.0);
    REQUIRE(c1.size() == 1);
    CHECK((c1.centers[0] - Point::Constant(0.5)).norm() < 1e-15);
    CHECK_THROWS(generate_cluster(box, 1.5));
    for (int n : {3, 5, 7}) {
        const Cluster c = generate_cluster(box, 1.0 / n);
        CHECK(c.size() == static_cast<std::size_t>(n * n * n));
    }
    // non-commensurate box leaves a gap
    const Cluster g = generate_cluster(DomainShape::box(Point::Zero(), Point(1.2, 1.2, 1.2)), 0.5);
    CHECK(g.size() == 8);
}

TEST_CASE("ball cluster against brute-force scan of the 5^3 candidate lattice") {
    const DomainShape ball = DomainShape::ball(Point::Zero(), 1.0);
    const Cluster c = generate_cluster(ball, 0.4);
    std::size_t brute = 0;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
            for (int l = -2; l <= 2; ++l) {
                const Point z = 0.4 * Point(i, j, l);
                bool inside = true;
                for (int v = 0; v < 8; ++v) {
                    const Point corner = z + 0.2 * Point(v & 1 ? 1 : -1, v & 2 ? 1 : -1, v & 4 ? 1 : -1);
                    inside = inside && corner.norm() <= 1.0;
                }
                brute += inside;
            }
    CHECK(c.size() == brute);
    CHECK(brute == 19);  // centre, 6 faces, 12 edges
}

TEST_CASE("cluster invariants") {
    for (const DomainShape& dom : {DomainShape::unit_box(), DomainShape::ball(Point(0.1, 0.2, 0.3), 0.8)}) {
        const Cluster c = generate_cluster(dom, 0.13);
        CHECK(c.size() * std::pow(0.13, 3) <= dom.volume());
        double dmin = 1e9;
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j) dmin = std::min(dmin, (c.centers[i] - c.centers[j]).norm());
        CHECK(dmin >= 0.13 * (1 - 1e-12));
    }
    // covered fraction of the box approaches 1 with the stated rate
    for (double d : {0.3, 0.15, 0.07}) {
        const Cluster c = generate_cluster(DomainShape::unit_box(), d);
        const double gap = 1.0 - c.size() * d * d * d;
        CHECK(gap <= 3 * d * 6.0);
    }
}

TEST_CASE("counting sums") {
    Cluster two;
    two.centers = {Point::Zero(), Point(0.5, 0, 0)};
    two.d = 0.5;
    CHECK(counting_sum(two, 3, 0) == doctest::Approx(8.0).epsilon(1e-14));
    const Cluster c8 = generate_cluster(DomainShape::unit_box(), 0.5);
    // corner particle: 3 at 0.5, 3 at 0.5 sqrt2, 1 at 0.5 sqrt3
    const double ref = 3 / 0.5 + 3 / (0.5 * std::sqrt(2.0)) + 1 / (0.5 * std::sqrt(3.0));
    CHECK(counting_sum(c8, 1, 0) == doctest::Approx(ref).epsilon(1e-14));
    CHECK_THROWS_AS(counting_sum(c8, 1, 8), DomainError);
}

TEST_CASE("counting regressions") {
    std::vector<double> ds, s1, s2, s4;
    for (int n = 4; n <= 12; ++n) {
        const Cluster c = generate_cluster(DomainShape::unit_box(), 1.0 / n);
        ds.push_back(1.0 / n);
        s1.push_back(max_counting_sum(c, 1));
        s2.push_back(max_counting_sum(c, 2));
        s4.push_back(max_counting_sum(c, 4));
    }
    CHECK(std::abs(loglog_slope(ds, s1) + 3) <= 0.3);
    CHECK(std::abs(loglog_slope(ds, s2) + 3) <= 0.3);
    CHECK(std::abs(loglog_slope(ds, s4) + 4) <= 0.3);
}

TEST_CASE("boundary statistic") {
    const Cluster full = generate_cluster(DomainShape::unit_box(), 1.0);
    CHECK(boundary_counting_statistic(full) == 0.0);
    const Cluster unit8 = generate_cluster(DomainShape::unit_box(), 0.5);
    CHECK(boundary_counting_statistic(unit8, 4) == boundary_counting_statistic(unit8, 40));
    // 8 particles with a nonempty complement, refined quadrature oracle
    const Cluster c = generate_cluster(DomainShape::box(Point::Zero(), Point(1.2, 1.2, 1.2)), 0.5);
    REQUIRE(c.size() == 8);
    const double coarse = boundary_counting_statistic(c, 4);
    const double fine = boundary_counting_statistic(c, 40);
    CHECK(coarse > 0);
    CHECK(std::abs(coarse - fine) <= 0.05 * fine);
}
