#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ballspace/point.hpp"

namespace ballspace {

struct MeasureSpec {
    enum Kind { Volume, WeightedVolume, Invariant, Surface } kind = Volume;
    double alpha = 0.0;

    static MeasureSpec volume() { return {Volume, 0.0}; }
    static MeasureSpec weighted_volume(double alpha);
    static MeasureSpec invariant() { return {Invariant, 0.0}; }
    static MeasureSpec surface() { return {Surface, 0.0}; }

    // c_alpha = Gamma(n+alpha+1) / (n! Gamma(alpha+1)); makes dV_alpha mass 1.
    double normalizer(int n) const;
};

struct IntegralEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    enum Method { Mc, ProductQuadrature } method = Mc;
    bool reliable = true;
    std::string note;  // truncation-order tag for product quadrature
};

struct WeightedSample {
    Point z;
    double weight;  // sum over samples of weight * h(z) estimates int_B h dV
};

/* Polar importance sampling of normalized volume: direction uniform on S,
 * radius with density ~ r^(2n-1)(1-r^2)^gamma.  gamma > -1; gamma < 0
 * pushes samples toward the boundary where N-norm integrands live. */
std::vector<WeightedSample> sample_ball(int n, std::int64_t count, uint64_t seed,
                                        double radial_bias = 0.0);

// Uniform surface samples, weight 1/count each.
std::vector<WeightedSample> sample_sphere(int n, std::int64_t count, uint64_t seed);

// Single draws addressed by (seed, index): building blocks of the samplers.
Point sphere_point(int n, uint64_t seed, uint64_t index);
WeightedSample ball_sample(int n, uint64_t seed, uint64_t index, double radial_bias,
                           double log_norm);
// log of the radial density normalizer Z = (1/2) B(n, gamma+1)
double radial_bias_log_norm(int n, double radial_bias);

using RealField = std::function<double(const Point&)>;

IntegralEstimate integrate(const RealField& f, const MeasureSpec& measure, int n,
                           std::int64_t budget, uint64_t seed, double radial_bias = 0.0);

/* Deterministic n=1 rule: trapezoid in the angle (spectrally accurate for
 * periodic integrands) x tanh-sinh in the radius (handles the (1-r^2)^alpha
 * endpoint behaviour).  std_error = 0, note carries the node counts. */
IntegralEstimate integrate_product_n1(const RealField& f, const MeasureSpec& measure,
                                      int angular_nodes = 512);

// omega_{alpha,k} = (int_S |xi^alpha|^k dsigma)^(1/k); exact where a closed
// form exists (k = 2, or alpha supported on one axis), MC otherwise.
double sphere_moment(const std::vector<int64_t>& alpha, double k, int n,
                     std::int64_t budget = 20000, uint64_t seed = 12345);

// M_k(r, f) = (int_S |f(r xi)|^k dsigma)^(1/k)
double radial_mean(const std::function<cplx(const Point&)>& f, int n, double r, double k,
                   std::int64_t budget = 20000, uint64_t seed = 12345);

}  // namespace ballspace
