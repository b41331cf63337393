#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ballspace {

using cplx = std::complex<double>;

// Error with a stable machine-readable code ("invalid-bias", ...).
class BallError : public std::runtime_error {
public:
    BallError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Point of the closed unit ball of C^n.
struct Point {
    std::vector<cplx> z;

    Point() = default;
    explicit Point(std::vector<cplx> coords) : z(std::move(coords)) {}
    static Point zero(int n) { return Point(std::vector<cplx>(n, cplx(0.0))); }
    static Point real1(double x) { return Point({cplx(x, 0.0)}); }

    int dim() const { return static_cast<int>(z.size()); }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& c : z) s += std::norm(c);
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }

    // Scale onto the unit sphere; tolerance guards against zero input.
    Point normalized() const {
        double n = norm();
        if (n < 1e-12) throw BallError("degenerate-direction", "cannot normalize ~0 point");
        Point p = *this;
        for (auto& c : p.z) c /= n;
        return p;
    }
};

// <z,w> = sum z_k * conj(w_k)
inline cplx inner(const Point& z, const Point& w) {
    cplx s(0.0);
    for (int k = 0; k < z.dim(); ++k) s += z.z[k] * std::conj(w.z[k]);
    return s;
}

inline Point operator*(double c, const Point& p) {
    Point q = p;
    for (auto& v : q.z) v *= c;
    return q;
}

// (n, p, q, s) with the derived thresholds used all over the membership logic.
struct SpaceParams {
    int n = 1;
    double p = 2.0, q = 1.0, s = 0.5;

    bool polynomial_ok = false;  // ns + q > n
    bool big_s = false;          // s > 1
    bool green_ok = false;       // s < n/(n-1), n >= 2 only

    SpaceParams() { derive(); }
    SpaceParams(int n_, double p_, double q_, double s_) : n(n_), p(p_), q(q_), s(s_) {
        if (n < 1) throw BallError("invalid-params", "dimension must be >= 1");
        if (p < 1.0) throw BallError("invalid-params", "p must be >= 1");
        if (q <= 0.0) throw BallError("invalid-params", "q must be > 0");
        if (s <= 0.0) throw BallError("invalid-params", "s must be > 0");
        derive();
    }

    double ns() const { return n * s; }
    double threshold() const { return n * s + q - n; }  // polynomials live iff > 0
    double star_limit() const { return n >= 2 ? double(n) / double(n - 1) : 0.0; }

private:
    void derive() {
        polynomial_ok = n * s + q > double(n);
        big_s = s > 1.0;
        green_ok = n >= 2 && s < double(n) / double(n - 1);
    }
};

}  // namespace ballspace
