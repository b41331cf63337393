#pragma once

#include <variant>

#include "ballspace/point.hpp"

namespace ballspace {

// Phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z,a>), the involutive
// automorphism of the ball swapping 0 and a.
Point moebius(const Point& a, const Point& z);

/* 1 - |Phi_a(z)|^2 computed by the product identity
 *    (1-|a|^2)(1-|z|^2)/|1-<z,a>|^2,
 * which is stable near the boundary where the direct difference cancels. */
double one_minus_phi_sq(const Point& a, const Point& z);

// beta(z,w) = (1/2) log((1+|Phi_z(w)|)/(1-|Phi_z(w)|))
double bergman_distance(const Point& z, const Point& w);

struct Region {
    enum Kind { Tube, Tent, MetricBall, EuclidBallD } kind;
    Point center;   // xi (Tube/Tent, boundary) or a (balls, interior)
    double size;    // delta, r, or R
};

Region tube(const Point& xi, double delta);
Region tent(const Point& xi, double delta);
Region metric_ball(const Point& a, double r);
Region euclid_ball_D(const Point& a, double R);

bool region_contains(const Region& region, const Point& z);

/* g(z) = ((n+1)/(2n)) int_{|z|}^1 (1-t^2)^{n-1} t^{-2n+1} dt, radial:
 * only |z| and the dimension matter.  n >= 2; g diverges at 0. */
double green_function_radial(int n, double abs_z);
double green_function(const Point& z);
double green_invariant(const Point& z, const Point& a);

}  // namespace ballspace
