#include "ballspace/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace ballspace {

Point moebius(const Point& a, const Point& z) {
    double a2 = a.norm_sq();
    if (a2 >= 1.0) throw BallError("invalid-automorphism-center", "|a| must be < 1");
    int n = a.dim();
    if (a2 == 0.0) {
        Point out = z;
        for (auto& c : out.z) c = -c;
        return out;
    }
    double sa = std::sqrt(1.0 - a2);
    cplx za = inner(z, a);
    cplx proj = za / a2;  // P_a z = proj * a
    Point out = Point::zero(n);
    cplx denom = cplx(1.0) - za;
    for (int k = 0; k < n; ++k) {
        cplx pa = proj * a.z[k];
        cplx qa = z.z[k] - pa;
        out.z[k] = (a.z[k] - pa - sa * qa) / denom;
    }
    return out;
}

double one_minus_phi_sq(const Point& a, const Point& z) {
    double a2 = a.norm_sq();
    if (a2 >= 1.0) throw BallError("invalid-automorphism-center", "|a| must be < 1");
    cplx d = cplx(1.0) - inner(z, a);
    return (1.0 - a2) * (1.0 - z.norm_sq()) / std::norm(d);
}

double bergman_distance(const Point& z, const Point& w) {
    double om = one_minus_phi_sq(z, w);
    if (om >= 1.0) return 0.0;
    double t = std::sqrt(1.0 - std::min(1.0, std::max(0.0, om)));
    return 0.5 * std::log((1.0 + t) / (1.0 - t));
}

Region tube(const Point& xi, double delta) { return Region{Region::Tube, xi, delta}; }
Region tent(const Point& xi, double delta) { return Region{Region::Tent, xi, delta}; }
Region metric_ball(const Point& a, double r) { return Region{Region::MetricBall, a, r}; }
Region euclid_ball_D(const Point& a, double R) { return Region{Region::EuclidBallD, a, R}; }

bool region_contains(const Region& region, const Point& z) {
    switch (region.kind) {
        case Region::Tube:
            return std::abs(cplx(1.0) - inner(z, region.center)) < region.size;
        case Region::Tent: {
            double nz = z.norm();
            if (nz <= 0.0) return region.size > 1.0;
            if (nz <= 1.0 - region.size || nz >= 1.0) return false;
            Point dir = z;
            for (auto& c : dir.z) c /= nz;
            return std::abs(cplx(1.0) - inner(dir, region.center)) < region.size;
        }
        case Region::MetricBall:
            return bergman_distance(region.center, z) < region.size;
        case Region::EuclidBallD:
            return 1.0 - one_minus_phi_sq(region.center, z) < region.size * region.size;
    }
    return false;
}

double green_function_radial(int n, double abs_z) {
    if (n < 2) throw BallError("unsupported-dimension", "green function needs n >= 2");
    if (abs_z <= 0.0) throw BallError("divergent-green", "green function diverges at 0");
    if (abs_z >= 1.0) return 0.0;
    auto integrand = [n](double t) {
        return std::pow(1.0 - t * t, n - 1) * std::pow(t, -2 * n + 1);
    };
    double err = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, abs_z, 1.0, 12, 1e-10, &err);
    return (double(n) + 1.0) / (2.0 * n) * val;
}

double green_function(const Point& z) { return green_function_radial(z.dim(), z.norm()); }

double green_invariant(const Point& z, const Point& a) {
    double om = one_minus_phi_sq(a, z);
    double t2 = 1.0 - std::min(1.0, om);
    return green_function_radial(z.dim(), std::sqrt(std::max(0.0, t2)));
}

}  // namespace ballspace
