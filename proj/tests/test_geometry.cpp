#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ballspace/geometry.hpp"
#include "ballspace/rng.hpp"

using namespace ballspace;

namespace {

Point random_interior(int n, uint64_t seed, uint64_t idx, double rmax = 0.95) {
    CounterRng rng(seed, idx);
    std::vector<cplx> v(n);
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        double g1, g2;
        rng.gauss2(g1, g2);
        v[k] = cplx(g1, g2);
        s += std::norm(v[k]);
    }
    s = std::sqrt(s);
    if (s < 1e-12) return Point::zero(n);
    double r = rmax * std::pow(rng.u01(), 0.5 / n);
    for (auto& c : v) c *= r / s;
    return Point(std::move(v));
}

double dist_pts(const Point& a, const Point& b) {
    double s = 0.0;
    for (int k = 0; k < a.dim(); ++k) s += std::norm(a.z[k] - b.z[k]);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("moebius swaps 0 and a") {
    for (int n : {1, 2, 3}) {
        for (uint64_t i = 0; i < 50; ++i) {
            Point a = random_interior(n, 7u, i);
            CHECK(dist_pts(moebius(a, Point::zero(n)), a) < 1e-13);
            CHECK(moebius(a, a).norm() < 1e-12);
        }
    }
}

TEST_CASE("moebius is an involution") {
    for (int n : {1, 2, 3}) {
        for (uint64_t i = 0; i < 400; ++i) {
            Point a = random_interior(n, 11u, 2 * i);
            Point z = random_interior(n, 11u, 2 * i + 1);
            Point back = moebius(a, moebius(a, z));
            CHECK(dist_pts(back, z) < 1e-10);
        }
    }
}

TEST_CASE("product identity for 1-|Phi|^2") {
    for (int n : {1, 2, 3}) {
        for (uint64_t i = 0; i < 400; ++i) {
            Point a = random_interior(n, 23u, 2 * i);
            Point z = random_interior(n, 23u, 2 * i + 1);
            double direct = 1.0 - moebius(a, z).norm_sq();
            CHECK(one_minus_phi_sq(a, z) == doctest::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("moebius rejects centers outside the open ball") {
    Point a({cplx(1.0, 0.0)});
    CHECK_THROWS_AS(moebius(a, Point::zero(1)), BallError);
    CHECK_THROWS_AS(one_minus_phi_sq(a, Point::zero(1)), BallError);
}

TEST_CASE("bergman distance basics") {
    for (uint64_t i = 0; i < 200; ++i) {
        Point z = random_interior(2, 31u, i);
        double expect = std::atanh(z.norm());
        CHECK(bergman_distance(Point::zero(2), z) == doctest::Approx(expect).epsilon(1e-10));
        CHECK(bergman_distance(z, z) == doctest::Approx(0.0));
    }
}

TEST_CASE("bergman distance is a metric") {
    for (int n : {1, 2}) {
        for (uint64_t i = 0; i < 300; ++i) {
            Point x = random_interior(n, 37u, 3 * i);
            Point y = random_interior(n, 37u, 3 * i + 1);
            Point w = random_interior(n, 37u, 3 * i + 2);
            double dxy = bergman_distance(x, y);
            double dyx = bergman_distance(y, x);
            CHECK(dxy == doctest::Approx(dyx).epsilon(1e-10));
            CHECK(dxy <= bergman_distance(x, w) + bergman_distance(w, y) + 1e-10);
            if (dist_pts(x, y) > 1e-9) CHECK(dxy > 0.0);
        }
    }
}

TEST_CASE("bergman distance is moebius invariant") {
    for (int n : {1, 2, 3}) {
        for (uint64_t i = 0; i < 200; ++i) {
            Point a = random_interior(n, 41u, 3 * i);
            Point z = random_interior(n, 41u, 3 * i + 1);
            Point w = random_interior(n, 41u, 3 * i + 2);
            double before = bergman_distance(z, w);
            double after = bergman_distance(moebius(a, z), moebius(a, w));
            CHECK(after == doctest::Approx(before).epsilon(1e-9));
        }
    }
}

TEST_CASE("dilation contracts the metric") {
    for (uint64_t i = 0; i < 200; ++i) {
        Point z = random_interior(2, 43u, 2 * i);
        Point w = random_interior(2, 43u, 2 * i + 1);
        for (double r : {0.3, 0.7, 0.9}) {
            CHECK(bergman_distance(r * z, r * w) <= bergman_distance(z, w) + 1e-12);
        }
    }
}

TEST_CASE("regions classify points") {
    Point xi({cplx(1.0, 0.0), cplx(0.0, 0.0)});
    Region tu = tube(xi, 0.25);
    CHECK(region_contains(tu, Point({cplx(0.9, 0.0), cplx(0.0)})));
    CHECK(!region_contains(tu, Point({cplx(-0.5, 0.0), cplx(0.0)})));
    CHECK(!region_contains(tu, Point::zero(2)));

    Region te = tent(xi, 0.25);
    CHECK(region_contains(te, Point({cplx(0.9, 0.0), cplx(0.0)})));
    CHECK(!region_contains(te, Point({cplx(0.5, 0.0), cplx(0.0)})));
    Point off({cplx(0.0, 0.0), cplx(0.9, 0.0)});
    CHECK(!region_contains(te, off));
    CHECK(!region_contains(te, Point::zero(2)));
    CHECK(region_contains(tent(xi, 1.5), Point::zero(2)));

    Region mb = metric_ball(Point::zero(2), 1.0);
    CHECK(region_contains(mb, Point({cplx(0.5, 0.0), cplx(0.0)})));
    CHECK(!region_contains(mb, Point({cplx(0.99, 0.0), cplx(0.0)})));

    Region eb = euclid_ball_D(Point::zero(2), 0.5);
    CHECK(region_contains(eb, Point({cplx(0.4, 0.0), cplx(0.0)})));
    CHECK(!region_contains(eb, Point({cplx(0.6, 0.0), cplx(0.0)})));
}

TEST_CASE("tubes nest and sandwich the tents") {
    Point xi({cplx(0.6, 0.8), cplx(0.0, 0.0)});
    double delta = 0.2;
    Region small_tube = tube(xi, delta);
    Region big_tube = tube(xi, 16.0 * delta);
    Region mid_tent = tent(xi, 4.0 * delta);
    CHECK(region_contains(tube(xi, 2.1), Point({cplx(-0.7, 0.0), cplx(0.0, 0.7)})));
    for (uint64_t i = 0; i < 2000; ++i) {
        Point z = random_interior(2, 61u, i, 0.9999);
        if (region_contains(small_tube, z)) {
            CHECK(region_contains(mid_tent, z));
            CHECK(region_contains(tube(xi, 0.5), z));
        }
        if (region_contains(mid_tent, z)) CHECK(region_contains(big_tube, z));
    }
}

TEST_CASE("euclid ball D matches the pseudo-hyperbolic distance") {
    // D(a,R) = { z : |Phi_a(z)| < R }
    for (uint64_t i = 0; i < 200; ++i) {
        Point a = random_interior(2, 59u, 2 * i);
        Point z = random_interior(2, 59u, 2 * i + 1);
        double rho = moebius(a, z).norm();
        Region d = euclid_ball_D(a, 0.5);
        CHECK(region_contains(d, z) == (rho < 0.5));
    }
}

TEST_CASE("green function radial values") {
    // closed forms of ((n+1)/(2n)) int_r^1 (1-t^2)^(n-1) t^(1-2n) dt
    double g2 = green_function_radial(2, 0.5);
    CHECK(g2 == doctest::Approx(0.6051396145800414).epsilon(1e-9));
    double g3 = green_function_radial(3, 0.5);
    CHECK(g3 == doctest::Approx(0.9620981203732967).epsilon(1e-9));
    CHECK(green_function_radial(2, 1.0) == doctest::Approx(0.0));
    CHECK(green_function_radial(2, 0.999) < 1e-5);
}

TEST_CASE("green function is radial and decreasing") {
    double prev = green_function_radial(2, 0.05);
    for (double r : {0.1, 0.2, 0.4, 0.6, 0.8, 0.95}) {
        double g = green_function_radial(2, r);
        CHECK(g < prev);
        CHECK(g > 0.0);
        prev = g;
    }
    Point z({cplx(0.3, 0.0), cplx(0.0, 0.4)});
    CHECK(green_function(z) == doctest::Approx(green_function_radial(2, 0.5)).epsilon(1e-12));
}

TEST_CASE("green endpoint asymptotics") {
    // g(t) ~ h(0) (1-t^2)^n t^(-2(n-1)) near 0 and h(1) (1-t^2)^n near 1
    for (int n : {2, 3}) {
        double t0 = 1e-4;
        double h0 = green_function_radial(n, t0) * std::pow(t0, 2 * (n - 1)) /
                    std::pow(1.0 - t0 * t0, n);
        CHECK(h0 == doctest::Approx((n + 1.0) / (2.0 * n * (2.0 * n - 2.0))).epsilon(1e-3));
        double t1 = 1.0 - 1e-6;
        double h1 = green_function_radial(n, t1) * std::pow(t1, 2 * (n - 1)) /
                    std::pow(1.0 - t1 * t1, n);
        CHECK(h1 == doctest::Approx((n + 1.0) / (4.0 * n * n)).epsilon(1e-3));
    }
}

TEST_CASE("green invariant form") {
    Point a({cplx(0.4, 0.1), cplx(-0.2, 0.0)});
    Point z({cplx(0.1, -0.3), cplx(0.25, 0.2)});
    double rho = moebius(a, z).norm();
    CHECK(green_invariant(z, a) == doctest::Approx(green_function_radial(2, rho)).epsilon(1e-9));
    // symmetric because |Phi_a(z)| = |Phi_z(a)|
    CHECK(green_invariant(z, a) == doctest::Approx(green_invariant(a, z)).epsilon(1e-9));
}

TEST_CASE("green function rejects bad input") {
    CHECK_THROWS_AS(green_function_radial(1, 0.5), BallError);
    CHECK_THROWS_AS(green_function_radial(2, 0.0), BallError);
    CHECK_THROWS_AS(green_function_radial(2, -0.1), BallError);
}
