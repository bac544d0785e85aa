#include <cmath>
#include <random>

#include "doctest.h"
#include "hyperphase/elementary.hpp"
#include "hyperphase/geometry.hpp"

using namespace hyperphase;

namespace {

// distance from p to the real diameter by scanning its points
double scan_distance_to_real_axis(DiskPoint p) {
    double best = 1e300;
    for (int i = -200000; i <= 200000; ++i) best = std::min(best, hyperbolic_distance(p, DiskPoint(i * 4.99e-6, 0.0)));
    return best;
}

}  // namespace

TEST_CASE("upper semicircle cap spans the real diameter, positive side up") {
    const Geodesic g = geodesic_of_cap(CapPair{IdealArc(kPi / 2, kPi / 2)});
    CHECK(g.is_diameter());
    CHECK(signed_distance(DiskPoint(0.0, 0.3), g) > 0.0);
    CHECK(signed_distance(DiskPoint(0.0, -0.3), g) < 0.0);
    CHECK(std::abs(signed_distance(DiskPoint(0.4, 0.0), g)) < 1e-14);
}

TEST_CASE("quarter cap at 0 is the circle of center (sqrt 2, 0) and radius 1") {
    const Geodesic g = geodesic_of_cap(CapPair{IdealArc(0.0, kPi / 4)});
    REQUIRE_FALSE(g.is_diameter());
    const auto c = g.circle();
    REQUIRE(c.has_value());
    CHECK(std::abs(c->center - DiskPoint(std::sqrt(2.0), 0.0)) < 1e-12);
    CHECK(c->radius == doctest::Approx(1.0).epsilon(1e-12));
    // orthogonality |c|^2 = 1 + r^2 and the endpoints lie on the circle
    CHECK(std::norm(c->center) == doctest::Approx(1.0 + c->radius * c->radius));
    for (double t : {kPi / 4, -kPi / 4}) CHECK(std::abs(std::abs(std::polar(1.0, t) - c->center) - 1.0) < 1e-12);
}

TEST_CASE("rotating a cap rotates its geodesic") {
    const double phi = 0.7;
    const Geodesic g = geodesic_of_cap(CapPair{IdealArc(0.3, 0.9)});
    const Geodesic r = geodesic_of_cap(CapPair{IdealArc(0.3 + phi, 0.9)});
    CHECK(std::abs(angle_diff(r.a.theta, g.a.theta + phi)) < 1e-12);
    CHECK(std::abs(angle_diff(r.b.theta, g.b.theta + phi)) < 1e-12);
}

TEST_CASE("signed distance of (0, 0.5) to the real diameter is ln 3") {
    const Geodesic g(IdealPoint(0.0), IdealPoint(kPi));
    const DiskPoint p(0.0, 0.5);
    CHECK(signed_distance(p, g) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(scan_distance_to_real_axis(p) == doctest::Approx(std::log(3.0)).epsilon(1e-8));
    CHECK(signed_distance(DiskPoint(0.25, 0.0), g) == doctest::Approx(0.0));
}

TEST_CASE("signed distance is invariant under disk automorphisms") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int t = 0; t < 20; ++t) {
        const Geodesic g(IdealPoint(ang(rng)), IdealPoint(ang(rng)));
        const auto z0 = random_disk_points(1, 0.8, rng).front();
        const MobiusMap T = MobiusMap::rotation(ang(rng)).compose(MobiusMap::translation_to_origin(z0));
        for (DiskPoint p : random_disk_points(20, 0.9, rng))
            CHECK(signed_distance(T(p), T(g)) == doctest::Approx(signed_distance(p, g)).epsilon(1e-9));
    }
}

TEST_CASE("to_diameter_map sends the endpoints to +-1") {
    const Geodesic g(IdealPoint(kPi / 4), IdealPoint(-kPi / 4));
    const MobiusMap T = to_diameter_map(g);
    CHECK(std::abs(T(std::polar(1.0, kPi / 4)) - DiskPoint(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(T(std::polar(1.0, -kPi / 4)) - DiskPoint(-1.0, 0.0)) < 1e-12);

    const Geodesic real(IdealPoint(0.0), IdealPoint(kPi));
    const MobiusMap I = to_diameter_map(real);
    for (DiskPoint p : {DiskPoint(0.3, 0.2), DiskPoint(-0.5, 0.1)})
        CHECK(std::abs(std::abs(I(p).imag()) - std::abs(p.imag())) < 1e-12);
}

TEST_CASE("to_diameter_map commutes with automorphisms up to a diameter-preserving map") {
    const Geodesic g(IdealPoint(0.4), IdealPoint(2.5));
    const MobiusMap T = MobiusMap::translation_to_origin(DiskPoint(0.2, -0.3));
    const MobiusMap A = to_diameter_map(T(g)).compose(T);
    const MobiusMap B = to_diameter_map(g);
    // both send g to the real diameter and agree on signed distances
    std::mt19937_64 rng(3);
    for (DiskPoint p : random_disk_points(20, 0.9, rng)) {
        const double da = std::asinh(2.0 * A(p).imag() / (1.0 - std::norm(A(p))));
        const double db = std::asinh(2.0 * B(p).imag() / (1.0 - std::norm(B(p))));
        CHECK(da == doctest::Approx(db).epsilon(1e-9));
    }
}

TEST_CASE("convex hull of two antipodal points is the degenerate diameter") {
    const ConvexHull h = convex_hull({ClosedArc{0.0, 0.0}, ClosedArc{kPi, 0.0}});
    CHECK(h.degenerate);
    CHECK(hull_contains(DiskPoint(0.3, 0.0), h, 1e-9));
    CHECK_FALSE(hull_contains(DiskPoint(0.0, 0.3), h, 1e-9));
}

TEST_CASE("hull of four points agrees with the half-plane membership oracle") {
    std::vector<ClosedArc> F;
    for (int k = 0; k < 4; ++k) F.push_back(ClosedArc{k * kPi / 2, 0.0});
    const ConvexHull h = convex_hull(F);
    CHECK(h.bounding.size() == 4);
    CHECK(hull_contains(DiskPoint(0.0, 0.0), h));
    int mismatches = 0, inside = 0;
    for (int i = -99; i <= 99; ++i)
        for (int j = -99; j <= 99; ++j) {
            const DiskPoint p(i / 100.0, j / 100.0);
            if (std::norm(p) >= 0.999) continue;
            // the geodesic between consecutive points is the unit circle around sqrt2 e^{i(pi/4 + k pi/2)}
            bool in = true;
            for (int k = 0; k < 4; ++k) in = in && std::abs(p - std::polar(std::sqrt(2.0), kPi / 4 + k * kPi / 2)) >= 1.0;
            const bool got = hull_contains(p, h);
            if (got != in && std::abs(hull_outward_distance(p, h)) > 1e-9) ++mismatches;
            inside += in;
        }
    CHECK(mismatches == 0);
    CHECK(inside > 1000);
}

TEST_CASE("single gap gives one bounding geodesic") {
    const ConvexHull h = convex_hull({ClosedArc{0.5, kTwoPi - 1.0}});
    REQUIRE(h.bounding.size() == 1);
    CHECK_FALSE(h.degenerate);
}

TEST_CASE("point 0.1 beyond a bounding geodesic is outside") {
    std::vector<ClosedArc> F;
    for (int k = 0; k < 4; ++k) F.push_back(ClosedArc{k * kPi / 2, 0.0});
    const ConvexHull h = convex_hull(F);
    const double r0 = std::sqrt(2.0) - 1.0;  // crossing of the pi/4 ray with the geodesic from 0 to pi/2
    const double r = std::tanh(std::atanh(r0) + 0.05);
    const DiskPoint p = std::polar(r, kPi / 4);
    CHECK_FALSE(hull_contains(p, h, 0.0));
    CHECK(hull_outward_distance(p, h) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("cone distance") {
    SUBCASE("points on a ray") {
        BoundaryData bd{{IdealArc(3 * kPi / 4, kPi / 2)}, {IdealArc(-kPi / 4, kPi / 2)}};
        const IdealCone cone{{IdealPoint(kPi / 4), IdealPoint(5 * kPi / 4)}};
        CHECK(std::abs(cone_signed_distance(std::polar(0.6, kPi / 4), cone, bd)) < 1e-9);
    }
    SUBCASE("antipodal rays reduce to the geodesic") {
        BoundaryData bd{{IdealArc(kPi / 2, kPi / 2)}, {IdealArc(-kPi / 2, kPi / 2)}};
        const IdealCone cone{{IdealPoint(0.0), IdealPoint(kPi)}};
        const Geodesic g(IdealPoint(0.0), IdealPoint(kPi));
        std::mt19937_64 rng(11);
        for (DiskPoint p : random_disk_points(50, 0.95, rng))
            CHECK(cone_signed_distance(p, cone, bd) == doctest::Approx(signed_distance(p, g)).epsilon(1e-8));
    }
    SUBCASE("non-antipodal rays against brute force over 10^6 ray points") {
        BoundaryData bd{{IdealArc(3 * kPi / 4, kPi / 2)}, {IdealArc(-kPi / 4, kPi / 2)}};
        const IdealCone cone{{IdealPoint(kPi / 4), IdealPoint(5 * kPi / 4)}};
        const DiskPoint p(0.5, 0.0);
        double best = 1e300;
        for (int ray = 0; ray < 2; ++ray)
            for (int i = 0; i < 500000; ++i) {
                const double t = i / 500000.0;
                best = std::min(best, hyperbolic_distance(p, std::polar(t, kPi / 4 + ray * kPi)));
            }
        const double d = cone_signed_distance(p, cone, bd);
        CHECK(d < 0.0);
        CHECK(std::abs(-d - best) < 1e-6);
    }
    SUBCASE("sign along a joint of two plus arcs") {
        BoundaryData bd{{IdealArc(kPi / 2, kPi / 4), IdealArc(kPi, kPi / 4)},
                        {IdealArc(3 * kPi / 2, kPi / 4), IdealArc(0.0, kPi / 4)}};
        const IdealCone cone{bd.interface_points()};
        const DiskPoint p = std::polar(0.7, 3 * kPi / 4);
        CHECK(cone_signed_distance(p, cone, bd) == doctest::Approx(hyperbolic_distance(p, 0.0)));
        CHECK(cone_signed_distance(-p, cone, bd) == doctest::Approx(-hyperbolic_distance(p, 0.0)));
    }
}

TEST_CASE("half-plane chart") {
    const IdealPoint base(0.8);
    CHECK(std::abs(disk_to_half_plane(base.position(), base)) < 1e-12);
    std::mt19937_64 rng(5);
    for (DiskPoint z : random_disk_points(50, 0.95, rng)) {
        const DiskPoint w = disk_to_half_plane(z, base);
        CHECK(w.imag() > 0.0);
        CHECK(std::abs(half_plane_to_disk(w, base) - z) < 1e-10);
    }
}

TEST_CASE("arc validation errors") {
    CHECK_THROWS_AS(IdealArc(0.0, 0.0), GeometryError);
    CHECK_THROWS_AS(IdealArc(0.0, 3.5), GeometryError);
    BoundaryData bd{{IdealArc(0.0, 1.0)}, {IdealArc(1.5, 1.0)}};
    CHECK_THROWS_WITH_AS(bd.validate(), doctest::Contains("boundary arcs overlap"), GeometryError);
}

TEST_CASE("free set and interface points of semicircle data") {
    BoundaryData bd{{IdealArc(kPi / 2, kPi / 2)}, {IdealArc(-kPi / 2, kPi / 2)}};
    CHECK_NOTHROW(bd.validate());
    CHECK(bd.interface_points().size() == 2);
    CHECK(bd.side_of(1.0) == 1);
    CHECK(bd.side_of(-1.0) == -1);
}
