#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lionman/domain.hpp"
#include "lionman/rng.hpp"

using namespace lionman;
using Catch::Approx;

TEST_CASE("construction rules") {
    Space e2 = Space::euclidean(2);
    Space s2 = Space::sphere2();
    CHECK_THROWS_AS(Domain::ball(s2, Point{0, 0, 1}, 0.5), InvalidInput);
    CHECK_THROWS_AS(Domain::box(s2, Point{0, 0, 1}, Point{0, 0, 1}), InvalidInput);
    CHECK_THROWS_AS(Domain::spherical_cap(e2, Point{0, 0}, 0.5), InvalidInput);
    CHECK_THROWS_AS(Domain::ball(e2, Point{0, 0}, 0.0), InvalidInput);
    CHECK_THROWS_AS(Domain::spherical_cap(s2, Point{0, 0, 1}, std::numbers::pi / 3), InvalidInput);
    CHECK_THROWS_AS(Domain::box(e2, Point{1, 0}, Point{0, 1}), InvalidInput);
    CHECK_THROWS_AS(Domain::box(e2, Point{1, 1}, Point{1, 1}), InvalidInput);
}

TEST_CASE("membership") {
    Space e2 = Space::euclidean(2);
    Domain ball = Domain::ball(e2, Point{0, 0}, 1.0);
    CHECK(ball.contains(Point{0, 0}));
    CHECK(ball.contains(Point{1, 0}));             // boundary counts as inside
    CHECK_FALSE(ball.contains(Point{1 + 1e-3, 0}));

    Space s2 = Space::sphere2();
    Domain cap = Domain::spherical_cap(s2, Point{0, 0, 1}, std::numbers::pi / 6);
    CHECK(cap.contains(Point{0, 0, 1}));
    CHECK_FALSE(cap.contains(Point{1, 0, 0}));

    Domain oct = Domain::octant(s2);
    CHECK(oct.contains(Point{1, 0, 0}));
    CHECK(oct.contains(Point{0, 0, 1}));
    double r3 = 1.0 / std::sqrt(3.0);
    CHECK(oct.contains(Point{r3, r3, r3}));
    CHECK_FALSE(oct.contains(Point{-r3, r3, r3}));
}

TEST_CASE("diameter bounds are tight") {
    Space l3 = Space::lp(2, 3.0);
    Domain ball = Domain::ball(l3, Point{1, 2}, 0.75);
    CHECK(ball.diameter_bound() == Approx(1.5).margin(1e-12));
    // an antipodal pair realizes the bound exactly
    Point lo{1, 2 - 0.75}, hi{1, 2 + 0.75};
    CHECK(l3.distance(lo, hi) == Approx(ball.diameter_bound()).margin(1e-6));

    Domain box = Domain::box(l3, Point{0, 0}, Point{2, 1});
    CHECK(box.diameter_bound() == Approx(l3.distance(Point{0, 0}, Point{2, 1})).margin(1e-12));

    Space s2 = Space::sphere2();
    Domain cap = Domain::spherical_cap(s2, Point{0, 0, 1}, std::numbers::pi / 8);
    CHECK(cap.diameter_bound() == Approx(std::numbers::pi / 4).margin(1e-12));
    CHECK(Domain::octant(s2).diameter_bound() == Approx(std::numbers::pi / 2).margin(1e-12));
}

TEST_CASE("domains are convex and bounded by b") {
    Rng rng(31);
    auto check_domain = [&](const Domain& dom) {
        const Space& s = dom.space();
        for (int i = 0; i < 1500; ++i) {
            Point x = dom.sample(rng), y = dom.sample(rng);
            CHECK(s.distance(x, y) <= dom.diameter_bound() + 1e-9);
            Point z = s.interpolate(x, y, rng.uniform01());
            CHECK(dom.contains(z));
        }
    };
    check_domain(Domain::ball(Space::euclidean(2), Point{0, 0}, 1.0));
    check_domain(Domain::ball(Space::lp(2, 1.5), Point{0.5, -1}, 2.0));
    check_domain(Domain::box(Space::lp(3, 3.0), Point{0, 0, 0}, Point{1, 2, 1}));
    check_domain(Domain::spherical_cap(Space::sphere2(), Point{0, 0, 1}, std::numbers::pi / 8));
    check_domain(Domain::octant(Space::sphere2()));
}

TEST_CASE("clamp_move") {
    Space e2 = Space::euclidean(2);
    Domain ball = Domain::ball(e2, Point{0, 0}, 1.0);

    SECTION("no-op when the target is legal") {
        Point t{0.1, 0.2};
        CHECK(ball.clamp_move(Point{0, 0}, t, 0.5) == t);
    }
    SECTION("zero move") {
        Point f{0.3, 0.3};
        CHECK(ball.clamp_move(f, f, 0.5) == f);
    }
    SECTION("geodesic exits the domain at the boundary") {
        Point r = ball.clamp_move(Point{0.9, 0}, Point{2, 0}, 0.5);
        CHECK(r[0] == Approx(1.0).margin(1e-9));
        CHECK(r[1] == Approx(0.0).margin(1e-12));
    }
    SECTION("from outside is an invalid state") {
        CHECK_THROWS_AS(ball.clamp_move(Point{2, 0}, Point{0, 0}, 0.5), InvalidState);
    }
    SECTION("postconditions on samples") {
        Rng rng(37);
        Domain cap = Domain::spherical_cap(Space::sphere2(), Point{0, 0, 1}, std::numbers::pi / 8);
        auto sweep = [&](const Domain& dom) {
            const Space& s = dom.space();
            for (int i = 0; i < 800; ++i) {
                Point from = dom.sample(rng);
                Point target = s.offset(from, rng.gaussian_vector(s.dim()),
                                        rng.uniform(0.0, 1.5 * dom.diameter_bound()));
                double D = rng.uniform(0.01, 0.5);
                Point got = dom.clamp_move(from, target, D);
                CHECK(dom.contains(got));
                CHECK(s.distance(from, got) <= D + 1e-9);
            }
        };
        sweep(ball);
        sweep(cap);
    }
}

TEST_CASE("sampling is deterministic, in-domain, and uniform-ish") {
    Space e2 = Space::euclidean(2);
    Domain ball = Domain::ball(e2, Point{0, 0}, 1.0);

    Rng a(42), b(42);
    for (int i = 0; i < 50; ++i) CHECK(ball.sample(a) == ball.sample(b));

    Rng rng(5);
    double mx = 0.0, my = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        Point p = ball.sample(rng);
        CHECK(ball.contains(p));
        mx += p[0];
        my += p[1];
    }
    CHECK(std::abs(mx / n) < 0.05);
    CHECK(std::abs(my / n) < 0.05);

    Domain cap = Domain::spherical_cap(Space::sphere2(), Point{0, 0, 1}, std::numbers::pi / 8);
    Rng rng2(6);
    for (int i = 0; i < 2000; ++i) CHECK(cap.contains(cap.sample(rng2)));
}
