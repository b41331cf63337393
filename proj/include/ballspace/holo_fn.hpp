#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ballspace/multiindex.hpp"
#include "ballspace/point.hpp"

namespace ballspace {

using PolyCoeffs = std::map<MultiIndex, cplx>;

struct PolyData {
    int n = 1;
    PolyCoeffs c;
};

// One Hadamard-gap block: a_k z_axis^{n_k}, or a general homogeneous
// polynomial of degree n_k with a supplied sup-norm bound.
struct LacunaryBlock {
    int axis = 0;
    cplx coeff{0.0};
    std::shared_ptr<const PolyData> poly;  // null -> monomial block
    double sup_norm = 0.0;                 // M_k
};

struct LacunaryData {
    int n = 1;
    std::vector<int64_t> freqs;
    std::vector<LacunaryBlock> blocks;
    double gap_ratio = 2.0;
};

/* f(z) = scale * sum_j A_j u^j (1-u)^(-e_j), u = <z,w>.  Closed under the
 * radial derivative and under d/dz_k, so every kernel the library uses
 * (K_w, J_w, L_w, atoms) and all their derivatives live here. */
struct RationalKernelData {
    Point w;
    cplx scale{1.0};
    struct Term {
        double coeff;
        int64_t upow;
        double expo;  // exponent of (1-u)^(-expo)
    };
    std::vector<Term> terms;
};

struct AtomicAtom {
    cplx c;
    Point a;
};

struct AtomicSumData {
    double b = 2.0;
    std::vector<AtomicAtom> atoms;
};

class HoloFn {
public:
    HoloFn();  // zero function (dimension 1)

    static HoloFn polynomial(int n, PolyCoeffs coeffs);
    static HoloFn constant(int n, cplx c);
    static HoloFn monomial(int n, const MultiIndex& eta, cplx c);
    static HoloFn lacunary(LacunaryData data);
    static HoloFn kernel_K(const Point& w, double p, double q);
    static HoloFn kernel_J(const Point& w, double p, double alpha, double b);
    static HoloFn kernel_L(const Point& w, double l);
    static HoloFn atom(const Point& a, double b);
    static HoloFn atomic_sum(AtomicSumData data);
    static HoloFn sum(std::vector<HoloFn> parts);

    int dim() const;
    cplx eval(const Point& z) const;
    cplx at_zero() const;
    std::vector<cplx> gradient(const Point& z) const;  // (d/dz_k f)(z)
    HoloFn radial() const;                             // Rf, exact per variant

    bool is_polynomial() const;  // polynomial variant (possibly via dilation)
    bool is_zero() const;

    const PolyData* as_polynomial() const;
    const LacunaryData* as_lacunary() const;
    const AtomicSumData* as_atomic() const;
    const RationalKernelData* as_kernel() const;

    // lacunary only: keep the first k blocks
    HoloFn truncated(int k) const;

    struct Node;
    explicit HoloFn(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    const std::shared_ptr<const Node>& node() const { return node_; }

private:
    std::shared_ptr<const Node> node_;
};

HoloFn dilate(const HoloFn& f, double r);
HoloFn radial_derivative(const HoloFn& f);
std::vector<cplx> gradient(const HoloFn& f, const Point& z);
std::vector<cplx> invariant_gradient(const HoloFn& f, const Point& z);
double invariant_gradient_norm(const HoloFn& f, const Point& z);

// T_{i,j} f = conj(z_j) d_i f - conj(z_i) d_j f, a non-holomorphic field
using Field = std::function<cplx(const Point&)>;
Field tangential_derivative(const HoloFn& f, int i, int j);
// sum_{i<j} |T_{i,j} f(z)|^p from one gradient evaluation
double tangential_sum_p(const HoloFn& f, const Point& z, double p);

// A_k f(z) = int_0^1 (d_k f)(b + t(z-b)) dt, exact on polynomials
HoloFn gleason_A(const HoloFn& f, int k, const Point& base);
HoloFn gleason_A(const HoloFn& f, int k);

enum class RsKind { T, L, M };
// On monomial pairs: T_g z^a = (|b|/(|a|+|b|)) z^(a+b), L_g the |a| weight,
// M_g the plain product; all extended bilinearly.  Polynomials only.
HoloFn riemann_stieltjes(RsKind kind, const HoloFn& g, const HoloFn& f);

// (f*g)_d = sum omega_eta(d) a_eta b_eta z^eta,
// omega_eta(d) = eta! Gamma(n+d) / Gamma(n+d+|eta|)
HoloFn hadamard_product(const HoloFn& f, const HoloFn& g, double d);
double hadamard_weight(const MultiIndex& eta, double d, int n);

// Rademacher sign flip of every coefficient, deterministic per seed.
HoloFn randomize(const HoloFn& f, uint64_t seed);

}  // namespace ballspace
