#include "ballspace/integrate.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "ballspace/parallel.hpp"
#include "ballspace/rng.hpp"

namespace ballspace {

MeasureSpec MeasureSpec::weighted_volume(double alpha) {
    if (alpha <= -1.0) throw BallError("invalid-params", "dV_alpha needs alpha > -1");
    return {WeightedVolume, alpha};
}

double MeasureSpec::normalizer(int n) const {
    if (kind != WeightedVolume) return 1.0;
    return std::exp(boost::math::lgamma(n + alpha + 1.0) - boost::math::lgamma(n + 1.0) -
                    boost::math::lgamma(alpha + 1.0));
}

Point sphere_point(int n, uint64_t seed, uint64_t index) {
    CounterRng rng(seed, index);
    Point p = Point::zero(n);
    double ns = 0.0;
    for (int k = 0; k < n; ++k) {
        double g1, g2;
        rng.gauss2(g1, g2);
        p.z[k] = cplx(g1, g2);
        ns += g1 * g1 + g2 * g2;
    }
    double inv = 1.0 / std::sqrt(ns);
    for (auto& c : p.z) c *= inv;
    return p;
}

double radial_bias_log_norm(int n, double radial_bias) {
    return std::log(0.5) + boost::math::lgamma(double(n)) +
           boost::math::lgamma(radial_bias + 1.0) -
           boost::math::lgamma(n + radial_bias + 1.0);
}

WeightedSample ball_sample(int n, uint64_t seed, uint64_t index, double radial_bias,
                           double log_norm) {
    CounterRng rng(seed, index);
    // r^2 ~ Beta(n, gamma+1) gives radial density ~ r^(2n-1)(1-r^2)^gamma
    double u = rng.u01();
    if (u <= 0.0) u = 0x1.0p-54;
    if (u >= 1.0) u = 1.0 - 0x1.0p-54;
    double x = boost::math::ibeta_inv(double(n), radial_bias + 1.0, u);
    x = std::min(x, 1.0 - 1e-15);
    double r = std::sqrt(x);
    Point p = Point::zero(n);
    double ns = 0.0;
    for (int k = 0; k < n; ++k) {
        double g1, g2;
        rng.gauss2(g1, g2);
        p.z[k] = cplx(g1, g2);
        ns += g1 * g1 + g2 * g2;
    }
    double inv = r / std::sqrt(ns);
    for (auto& c : p.z) c *= inv;
    // dV weight: [2n r^(2n-1)] / [r^(2n-1)(1-r^2)^gamma / Z] = 2n Z (1-r^2)^(-gamma)
    double w = 2.0 * n * std::exp(log_norm - radial_bias * std::log1p(-x));
    return {p, w};
}

std::vector<WeightedSample> sample_ball(int n, std::int64_t count, uint64_t seed,
                                        double radial_bias) {
    if (count < 1) throw BallError("invalid-params", "sample count must be >= 1");
    if (radial_bias <= -1.0) throw BallError("invalid-bias", "radial_bias must be > -1");
    double log_norm = radial_bias_log_norm(n, radial_bias);
    std::vector<WeightedSample> out(count);
    parallel_for(count, [&](std::int64_t i) {
        out[i] = ball_sample(n, seed, uint64_t(i), radial_bias, log_norm);
        out[i].weight /= double(count);
    });
    return out;
}

std::vector<WeightedSample> sample_sphere(int n, std::int64_t count, uint64_t seed) {
    if (count < 1) throw BallError("invalid-params", "sample count must be >= 1");
    std::vector<WeightedSample> out(count);
    parallel_for(count, [&](std::int64_t i) {
        out[i] = {sphere_point(n, seed, uint64_t(i)), 1.0 / double(count)};
    });
    return out;
}

IntegralEstimate integrate(const RealField& f, const MeasureSpec& measure, int n,
                           std::int64_t budget, uint64_t seed, double radial_bias) {
    if (budget < 1) throw BallError("invalid-params", "empty budget");
    if (radial_bias <= -1.0) throw BallError("invalid-bias", "radial_bias must be > -1");
    IntegralEstimate est;
    est.samples = budget;
    est.method = IntegralEstimate::Mc;

    std::array<double, 2> sums{};
    if (measure.kind == MeasureSpec::Surface) {
        sums = blocked_sum<2>(budget, [&](std::int64_t i) -> std::array<double, 2> {
            double v = f(sphere_point(n, seed, uint64_t(i)));
            return {v, v * v};
        });
        double mean = sums[0] / budget;
        double var = std::max(0.0, sums[1] / budget - mean * mean);
        est.value = mean;
        est.std_error = std::sqrt(var / budget);
    } else {
        double log_norm = radial_bias_log_norm(n, radial_bias);
        double c = measure.normalizer(n);
        auto factor = [&](const Point& z) -> double {
            double om = 1.0 - z.norm_sq();
            switch (measure.kind) {
                case MeasureSpec::Volume: return 1.0;
                case MeasureSpec::WeightedVolume: return c * std::pow(om, measure.alpha);
                case MeasureSpec::Invariant: return std::pow(om, -(n + 1.0));
                default: return 1.0;
            }
        };
        sums = blocked_sum<2>(budget, [&](std::int64_t i) -> std::array<double, 2> {
            WeightedSample ws = ball_sample(n, seed, uint64_t(i), radial_bias, log_norm);
            double v = ws.weight * f(ws.z) * factor(ws.z);
            return {v, v * v};
        });
        // weights carry 1/count implicitly here: ws.weight is the per-draw
        // importance ratio, so the estimator is the plain mean of v_i.
        double mean = sums[0] / budget;
        double var = std::max(0.0, sums[1] / budget - mean * mean);
        est.value = mean;
        est.std_error = std::sqrt(var / budget);
    }
    if (!(std::isfinite(est.value)) || (est.std_error > std::abs(est.value) && est.value != 0.0)) {
        est.reliable = false;
        est.note = "unreliable-estimate";
    }
    return est;
}

IntegralEstimate integrate_product_n1(const RealField& f, const MeasureSpec& measure,
                                      int angular_nodes) {
    IntegralEstimate est;
    est.method = IntegralEstimate::ProductQuadrature;
    est.std_error = 0.0;

    auto angular_mean = [&](double r) {
        double acc = 0.0;
        for (int j = 0; j < angular_nodes; ++j) {
            double th = 6.283185307179586476925286766559 * j / angular_nodes;
            acc += f(Point({cplx(r * std::cos(th), r * std::sin(th))}));
        }
        return acc / angular_nodes;
    };

    if (measure.kind == MeasureSpec::Surface) {
        est.value = angular_mean(1.0);
        est.samples = angular_nodes;
        est.note = "angular=" + std::to_string(angular_nodes);
        return est;
    }

    double c = measure.normalizer(1);
    auto radial = [&](double r) {
        double om = 1.0 - r * r;
        double w = 2.0 * r;
        switch (measure.kind) {
            case MeasureSpec::WeightedVolume: w *= c * std::pow(om, measure.alpha); break;
            case MeasureSpec::Invariant: w *= std::pow(om, -2.0); break;
            default: break;
        }
        return w * angular_mean(r);
    };
    boost::math::quadrature::tanh_sinh<double> quad;
    double err = 0.0, l1 = 0.0;
    est.value = quad.integrate(radial, 0.0, 1.0, 1e-11, &err, &l1);
    est.samples = angular_nodes;
    est.note = "tanh_sinh x angular=" + std::to_string(angular_nodes);
    if (!(err < 1e-8 * std::max(1.0, l1))) {
        est.reliable = false;
        est.note += " unreliable-estimate";
    }
    return est;
}

double sphere_moment(const std::vector<int64_t>& alpha, double k, int n,
                     std::int64_t budget, uint64_t seed) {
    if (k <= 0.0) throw BallError("invalid-params", "sphere moment needs k > 0");
    int64_t total = 0;
    int nonzero = -1, count_nonzero = 0;
    for (size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < 0) throw BallError("invalid-params", "multi-index must be >= 0");
        total += alpha[i];
        if (alpha[i] > 0) {
            nonzero = int(i);
            ++count_nonzero;
        }
    }
    if (total == 0) return 1.0;
    if (n == 1) return 1.0;  // |xi^m| = 1 on the circle

    if (k == 2.0) {
        // int_S |xi^alpha|^2 dsigma = (n-1)! alpha! / (n-1+|alpha|)!
        double lg = boost::math::lgamma(double(n));
        for (int64_t a : alpha) lg += boost::math::lgamma(double(a) + 1.0);
        lg -= boost::math::lgamma(double(n) + double(total));
        return std::exp(0.5 * lg);
    }
    if (count_nonzero == 1) {
        // |xi_j|^2 ~ Beta(1, n-1): int |xi_j|^t dsigma = (n-1) B(t/2+1, n-1)
        double t = k * double(alpha[nonzero]);
        double lg = std::log(double(n - 1)) +
                    boost::math::lgamma(0.5 * t + 1.0) + boost::math::lgamma(double(n - 1)) -
                    boost::math::lgamma(0.5 * t + double(n));
        return std::exp(lg / k);
    }

    auto sums = blocked_sum<1>(budget, [&](std::int64_t i) -> std::array<double, 1> {
        Point xi = sphere_point(n, seed, uint64_t(i));
        double logmod = 0.0;
        for (size_t j = 0; j < alpha.size(); ++j)
            if (alpha[j] > 0) logmod += double(alpha[j]) * std::log(std::abs(xi.z[j]));
        return {std::exp(k * logmod)};
    });
    return std::pow(sums[0] / budget, 1.0 / k);
}

double radial_mean(const std::function<cplx(const Point&)>& f, int n, double r, double k,
                   std::int64_t budget, uint64_t seed) {
    if (r < 0.0 || r >= 1.0) throw BallError("invalid-params", "radial mean needs r in [0,1)");
    if (n == 1) {
        int m = 1024;
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            double th = 6.283185307179586476925286766559 * j / m;
            acc += std::pow(std::abs(f(Point({cplx(r * std::cos(th), r * std::sin(th))}))), k);
        }
        return std::pow(acc / m, 1.0 / k);
    }
    auto sums = blocked_sum<1>(budget, [&](std::int64_t i) -> std::array<double, 1> {
        Point xi = sphere_point(n, seed, uint64_t(i));
        return {std::pow(std::abs(f(r * xi)), k)};
    });
    return std::pow(sums[0] / budget, 1.0 / k);
}

}  // namespace ballspace
