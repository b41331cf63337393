#include "ballspace/holo_fn.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "ballspace/rng.hpp"

namespace ballspace {

cplx cpow_int(cplx base, int64_t n) {
    if (n < 0) throw BallError("invalid-params", "negative integer power");
    cplx r(1.0), b = base;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

double MultiIndex::log_factorial() const {
    double s = 0.0;
    for (int64_t v : e) s += boost::math::lgamma(double(v) + 1.0);
    return s;
}

uint64_t MultiIndex::factorial_exact() const {
    uint64_t r = 1;
    for (int64_t v : e)
        for (int64_t j = 2; j <= v; ++j) {
            if (r > UINT64_MAX / uint64_t(j))
                throw BallError("overflow", "multi-index factorial exceeds 64 bits");
            r *= uint64_t(j);
        }
    return r;
}

cplx MultiIndex::power(const Point& z) const {
    cplx r(1.0);
    for (int i = 0; i < dim(); ++i) r *= cpow_int(z.z[i], e[i]);
    return r;
}

namespace {

constexpr double kLacTail = 1e-14;

cplx poly_eval(const PolyData& p, const Point& z) {
    cplx acc(0.0);
    for (const auto& [eta, c] : p.c) acc += c * eta.power(z);
    return acc;
}

void poly_gradient(const PolyData& p, const Point& z, std::vector<cplx>& g) {
    for (const auto& [eta, c] : p.c)
        for (int k = 0; k < p.n; ++k) {
            if (eta.e[k] == 0) continue;
            cplx t = c * double(eta.e[k]);
            for (int i = 0; i < p.n; ++i)
                t *= cpow_int(z.z[i], i == k ? eta.e[i] - 1 : eta.e[i]);
            g[k] += t;
        }
}

void prune(PolyCoeffs& c) {
    for (auto it = c.begin(); it != c.end();)
        it = std::abs(it->second) == 0.0 ? c.erase(it) : std::next(it);
}

}  // namespace

struct HoloFn::Node {
    enum Kind { Poly, Lac, Kernel, Atomic, Sum, Dil } kind = Poly;
    int n = 1;
    PolyData poly;
    LacunaryData lac;
    RationalKernelData ker;
    AtomicSumData atomic;
    std::vector<HoloFn> parts;
    std::shared_ptr<const Node> child;
    double dil_r = 1.0;
};

namespace {

using Node = HoloFn::Node;

std::shared_ptr<Node> make_node() { return std::make_shared<Node>(); }

cplx kernel_eval(const RationalKernelData& k, const Point& z) {
    cplx u = inner(z, k.w);
    cplx om = cplx(1.0) - u;
    cplx acc(0.0);
    for (const auto& t : k.terms) {
        if (t.expo > 0.0 && std::abs(om) < 1e-15)
            throw BallError("boundary-singularity", "kernel evaluated at its singularity");
        cplx v = t.coeff * cpow_int(u, t.upow);
        if (t.expo != 0.0) v *= std::exp(-t.expo * std::log(om));
        acc += v;
    }
    return k.scale * acc;
}

// common factor of grad: scale * sum A [ j u^(j-1) (1-u)^-e + e u^j (1-u)^-(e+1) ]
cplx kernel_grad_common(const RationalKernelData& k, const Point& z) {
    cplx u = inner(z, k.w);
    cplx om = cplx(1.0) - u;
    if (std::abs(om) < 1e-15)
        throw BallError("boundary-singularity", "kernel derivative at its singularity");
    cplx acc(0.0);
    for (const auto& t : k.terms) {
        cplx omp = std::exp(-t.expo * std::log(om));
        if (t.upow > 0) acc += t.coeff * double(t.upow) * cpow_int(u, t.upow - 1) * omp;
        if (t.expo != 0.0)
            acc += t.coeff * t.expo * cpow_int(u, t.upow) * omp / om;
    }
    return k.scale * acc;
}

RationalKernelData kernel_radial(const RationalKernelData& k) {
    RationalKernelData r;
    r.w = k.w;
    r.scale = k.scale;
    for (const auto& t : k.terms) {
        if (t.upow > 0) r.terms.push_back({t.coeff * double(t.upow), t.upow, t.expo});
        if (t.expo != 0.0) r.terms.push_back({t.coeff * t.expo, t.upow + 1, t.expo + 1.0});
    }
    return r;
}

double block_sup(const LacunaryBlock& b) { return b.poly ? b.sup_norm : std::abs(b.coeff); }

cplx lac_eval(const LacunaryData& d, const Point& z) {
    double az = z.norm();
    double logz = az > 0.0 ? std::log(az) : -1e300;
    cplx acc(0.0);
    for (size_t k = 0; k < d.freqs.size(); ++k) {
        if (block_sup(d.blocks[k]) * std::exp(double(d.freqs[k]) * logz) < kLacTail) break;
        const auto& b = d.blocks[k];
        acc += b.poly ? poly_eval(*b.poly, z) : b.coeff * cpow_int(z.z[b.axis], d.freqs[k]);
    }
    return acc;
}

void lac_gradient(const LacunaryData& d, const Point& z, std::vector<cplx>& g) {
    double az = z.norm();
    double logz = az > 0.0 ? std::log(az) : -1e300;
    for (size_t k = 0; k < d.freqs.size(); ++k) {
        double nk = double(d.freqs[k]);
        double bound = block_sup(d.blocks[k]) * nk *
                       (d.freqs[k] > 1 ? std::exp((nk - 1.0) * logz) : 1.0);
        if (bound < kLacTail) break;
        const auto& b = d.blocks[k];
        if (b.poly) {
            poly_gradient(*b.poly, z, g);
        } else if (d.freqs[k] >= 1) {
            g[b.axis] += b.coeff * nk * cpow_int(z.z[b.axis], d.freqs[k] - 1);
        }
    }
}

}  // namespace

HoloFn::HoloFn() {
    auto n = make_node();
    n->kind = Node::Poly;
    n->n = 1;
    n->poly.n = 1;
    node_ = std::move(n);
}

HoloFn HoloFn::polynomial(int n, PolyCoeffs coeffs) {
    for (const auto& [eta, c] : coeffs)
        if (eta.dim() != n) throw BallError("invalid-params", "multi-index dimension mismatch");
    auto nd = make_node();
    nd->kind = Node::Poly;
    nd->n = n;
    nd->poly.n = n;
    nd->poly.c = std::move(coeffs);
    prune(nd->poly.c);
    return HoloFn(std::move(nd));
}

HoloFn HoloFn::constant(int n, cplx c) {
    PolyCoeffs m;
    if (std::abs(c) != 0.0) m[MultiIndex::zero(n)] = c;
    return polynomial(n, std::move(m));
}

HoloFn HoloFn::monomial(int n, const MultiIndex& eta, cplx c) {
    PolyCoeffs m;
    m[eta] = c;
    return polynomial(n, std::move(m));
}

HoloFn HoloFn::lacunary(LacunaryData data) {
    if (data.freqs.size() != data.blocks.size())
        throw BallError("invalid-params", "lacunary freqs/blocks size mismatch");
    for (int64_t f : data.freqs)
        if (f < 1 || f > (int64_t(1) << 40))
            throw BallError("invalid-params", "frequencies must lie in [1, 2^40]");
    double min_ratio = data.freqs.size() > 1 ? 1e300 : data.gap_ratio;
    for (size_t k = 0; k + 1 < data.freqs.size(); ++k) {
        if (data.freqs[k + 1] <= data.freqs[k])
            throw BallError("invalid-params", "frequencies must be strictly increasing");
        min_ratio = std::min(min_ratio, double(data.freqs[k + 1]) / double(data.freqs[k]));
    }
    data.gap_ratio = min_ratio;
    for (auto& b : data.blocks) {
        if (!b.poly) {
            b.sup_norm = std::abs(b.coeff);
        } else if (b.sup_norm <= 0.0) {
            double s = 0.0;
            for (const auto& [eta, c] : b.poly->c) s += std::abs(c);
            b.sup_norm = s;
        }
    }
    auto nd = make_node();
    nd->kind = Node::Lac;
    nd->n = data.n;
    nd->lac = std::move(data);
    return HoloFn(std::move(nd));
}

namespace {
HoloFn make_kernel(int n, RationalKernelData k) {
    auto nd = make_node();
    nd->kind = Node::Kernel;
    nd->n = n;
    nd->ker = std::move(k);
    return HoloFn(std::move(nd));
}
}  // namespace

HoloFn HoloFn::kernel_K(const Point& w, double p, double q) {
    if (w.norm_sq() >= 1.0) throw BallError("invalid-params", "kernel base point must be interior");
    if (1.0 + q / p <= 0.0) throw BallError("invalid-params", "kernel exponent must be positive");
    RationalKernelData k;
    k.w = w;
    k.scale = 1.0 - w.norm_sq();
    k.terms = {{1.0, 0, 1.0 + q / p}};
    return make_kernel(w.dim(), std::move(k));
}

HoloFn HoloFn::kernel_J(const Point& w, double p, double alpha, double b) {
    if (w.norm_sq() >= 1.0) throw BallError("invalid-params", "kernel base point must be interior");
    int n = w.dim();
    RationalKernelData k;
    k.w = w;
    k.scale = std::pow(1.0 - w.norm_sq(), b - (n + 1.0 + alpha) / p);
    k.terms = {{1.0, 0, b}};
    return make_kernel(n, std::move(k));
}

HoloFn HoloFn::kernel_L(const Point& w, double l) {
    if (w.norm_sq() >= 1.0) throw BallError("invalid-params", "kernel base point must be interior");
    RationalKernelData k;
    k.w = w;
    k.scale = std::pow(1.0 - w.norm_sq(), l);
    k.terms = {{1.0, 0, 2.0 * l}};
    return make_kernel(w.dim(), std::move(k));
}

HoloFn HoloFn::atom(const Point& a, double b) {
    if (a.norm_sq() >= 1.0) throw BallError("invalid-params", "atom center must be interior");
    RationalKernelData k;
    k.w = a;
    k.scale = std::pow(1.0 - a.norm_sq(), b);
    k.terms = {{1.0, 0, b}};
    return make_kernel(a.dim(), std::move(k));
}

HoloFn HoloFn::atomic_sum(AtomicSumData data) {
    int n = data.atoms.empty() ? 1 : data.atoms.front().a.dim();
    for (const auto& at : data.atoms)
        if (at.a.norm_sq() >= 1.0 || at.a.dim() != n)
            throw BallError("invalid-params", "atom centers must be interior, same dimension");
    auto nd = make_node();
    nd->kind = Node::Atomic;
    nd->n = n;
    nd->atomic = std::move(data);
    return HoloFn(std::move(nd));
}

HoloFn HoloFn::sum(std::vector<HoloFn> parts) {
    if (parts.empty()) return HoloFn();
    bool all_poly = true;
    for (const auto& p : parts) all_poly = all_poly && p.is_polynomial();
    if (all_poly) {
        int n = parts.front().dim();
        PolyCoeffs acc;
        for (const auto& p : parts)
            for (const auto& [eta, c] : p.as_polynomial()->c) acc[eta] += c;
        return polynomial(n, std::move(acc));
    }
    if (parts.size() == 1) return parts.front();
    auto nd = make_node();
    nd->kind = Node::Sum;
    nd->n = parts.front().dim();
    nd->parts = std::move(parts);
    return HoloFn(std::move(nd));
}

int HoloFn::dim() const { return node_->n; }

cplx HoloFn::eval(const Point& z) const {
    const Node& nd = *node_;
    switch (nd.kind) {
        case Node::Poly: return poly_eval(nd.poly, z);
        case Node::Lac: return lac_eval(nd.lac, z);
        case Node::Kernel: return kernel_eval(nd.ker, z);
        case Node::Atomic: {
            cplx acc(0.0);
            for (const auto& at : nd.atomic.atoms) {
                cplx om = cplx(1.0) - inner(z, at.a);
                if (std::abs(om) < 1e-15)
                    throw BallError("boundary-singularity", "atom evaluated at its singularity");
                acc += at.c * std::exp(nd.atomic.b *
                                       (std::log1p(-at.a.norm_sq()) - std::log(om)));
            }
            return acc;
        }
        case Node::Sum: {
            cplx acc(0.0);
            for (const auto& p : nd.parts) acc += p.eval(z);
            return acc;
        }
        case Node::Dil: {
            Point rz = nd.dil_r * z;
            return HoloFn(nd.child).eval(rz);
        }
    }
    return cplx(0.0);
}

cplx HoloFn::at_zero() const { return eval(Point::zero(dim())); }

std::vector<cplx> HoloFn::gradient(const Point& z) const {
    const Node& nd = *node_;
    std::vector<cplx> g(nd.n, cplx(0.0));
    switch (nd.kind) {
        case Node::Poly: poly_gradient(nd.poly, z, g); break;
        case Node::Lac: lac_gradient(nd.lac, z, g); break;
        case Node::Kernel: {
            cplx common = kernel_grad_common(nd.ker, z);
            for (int k = 0; k < nd.n; ++k) g[k] = common * std::conj(nd.ker.w.z[k]);
            break;
        }
        case Node::Atomic: {
            for (const auto& at : nd.atomic.atoms) {
                cplx om = cplx(1.0) - inner(z, at.a);
                if (std::abs(om) < 1e-15)
                    throw BallError("boundary-singularity", "atom derivative at its singularity");
                cplx common = at.c * nd.atomic.b *
                              std::exp(nd.atomic.b * std::log1p(-at.a.norm_sq()) -
                                       (nd.atomic.b + 1.0) * std::log(om));
                for (int k = 0; k < nd.n; ++k) g[k] += common * std::conj(at.a.z[k]);
            }
            break;
        }
        case Node::Sum: {
            for (const auto& p : nd.parts) {
                auto pg = p.gradient(z);
                for (int k = 0; k < nd.n; ++k) g[k] += pg[k];
            }
            break;
        }
        case Node::Dil: {
            Point rz = nd.dil_r * z;
            g = HoloFn(nd.child).gradient(rz);
            for (auto& v : g) v *= nd.dil_r;
            break;
        }
    }
    return g;
}

HoloFn HoloFn::radial() const {
    const Node& nd = *node_;
    switch (nd.kind) {
        case Node::Poly: {
            PolyCoeffs c;
            for (const auto& [eta, v] : nd.poly.c)
                if (eta.degree() > 0) c[eta] = v * double(eta.degree());
            return polynomial(nd.n, std::move(c));
        }
        case Node::Lac: {
            LacunaryData d = nd.lac;
            for (size_t k = 0; k < d.blocks.size(); ++k) {
                double nk = double(d.freqs[k]);
                auto& b = d.blocks[k];
                if (b.poly) {
                    auto p = std::make_shared<PolyData>(*b.poly);
                    for (auto& [eta, v] : p->c) v *= nk;
                    b.poly = std::move(p);
                    b.sup_norm *= nk;
                } else {
                    b.coeff *= nk;
                    b.sup_norm = std::abs(b.coeff);
                }
            }
            return lacunary(std::move(d));
        }
        case Node::Kernel: return make_kernel(nd.n, kernel_radial(nd.ker));
        case Node::Atomic: {
            std::vector<HoloFn> parts;
            for (const auto& at : nd.atomic.atoms) {
                RationalKernelData k;
                k.w = at.a;
                k.scale = at.c * std::pow(1.0 - at.a.norm_sq(), nd.atomic.b);
                k.terms = {{nd.atomic.b, 1, nd.atomic.b + 1.0}};
                parts.push_back(make_kernel(nd.n, std::move(k)));
            }
            if (parts.empty()) return constant(nd.n, 0.0);
            return sum(std::move(parts));
        }
        case Node::Sum: {
            std::vector<HoloFn> parts;
            for (const auto& p : nd.parts) parts.push_back(p.radial());
            return sum(std::move(parts));
        }
        case Node::Dil: {
            auto nd2 = make_node();
            nd2->kind = Node::Dil;
            nd2->n = nd.n;
            nd2->child = HoloFn(nd.child).radial().node();
            nd2->dil_r = nd.dil_r;
            return HoloFn(std::move(nd2));
        }
    }
    return HoloFn();
}

bool HoloFn::is_polynomial() const { return node_->kind == Node::Poly; }

bool HoloFn::is_zero() const {
    const Node& nd = *node_;
    switch (nd.kind) {
        case Node::Poly: return nd.poly.c.empty();
        case Node::Lac: {
            for (const auto& b : nd.lac.blocks)
                if (block_sup(b) != 0.0) return false;
            return true;
        }
        case Node::Atomic: {
            for (const auto& at : nd.atomic.atoms)
                if (std::abs(at.c) != 0.0) return false;
            return true;
        }
        case Node::Kernel: {
            for (const auto& t : nd.ker.terms)
                if (t.coeff != 0.0) return false;
            return true;
        }
        case Node::Sum: {
            for (const auto& p : nd.parts)
                if (!p.is_zero()) return false;
            return true;
        }
        case Node::Dil: return HoloFn(nd.child).is_zero();
    }
    return false;
}

const PolyData* HoloFn::as_polynomial() const {
    return node_->kind == Node::Poly ? &node_->poly : nullptr;
}
const LacunaryData* HoloFn::as_lacunary() const {
    return node_->kind == Node::Lac ? &node_->lac : nullptr;
}
const AtomicSumData* HoloFn::as_atomic() const {
    return node_->kind == Node::Atomic ? &node_->atomic : nullptr;
}
const RationalKernelData* HoloFn::as_kernel() const {
    return node_->kind == Node::Kernel ? &node_->ker : nullptr;
}

HoloFn HoloFn::truncated(int k) const {
    const LacunaryData* lacd = as_lacunary();
    if (!lacd) throw BallError("invalid-params", "truncation applies to lacunary series");
    LacunaryData d = *lacd;
    size_t keep = std::min<size_t>(size_t(std::max(k, 0)), d.freqs.size());
    d.freqs.resize(keep);
    d.blocks.resize(keep);
    return lacunary(std::move(d));
}

HoloFn dilate(const HoloFn& f, double r) {
    if (r <= 0.0 || r > 1.0) throw BallError("invalid-params", "dilation needs r in (0,1]");
    if (r == 1.0) return f;
    const HoloFn::Node& nd = *f.node();
    if (const PolyData* p = f.as_polynomial()) {
        PolyCoeffs c;
        for (const auto& [eta, v] : p->c) c[eta] = v * std::pow(r, double(eta.degree()));
        return HoloFn::polynomial(p->n, std::move(c));
    }
    if (const LacunaryData* l = f.as_lacunary()) {
        LacunaryData d = *l;
        for (size_t k = 0; k < d.blocks.size(); ++k) {
            double rk = std::exp(double(d.freqs[k]) * std::log(r));
            auto& b = d.blocks[k];
            if (b.poly) {
                auto p = std::make_shared<PolyData>(*b.poly);
                for (auto& [eta, v] : p->c) v *= rk;
                b.poly = std::move(p);
                b.sup_norm *= rk;
            } else {
                b.coeff *= rk;
            }
        }
        return HoloFn::lacunary(std::move(d));
    }
    auto nd2 = std::make_shared<HoloFn::Node>();
    nd2->kind = HoloFn::Node::Dil;
    nd2->n = nd.n;
    if (nd.kind == HoloFn::Node::Dil) {
        nd2->child = nd.child;
        nd2->dil_r = nd.dil_r * r;
    } else {
        nd2->child = f.node();
        nd2->dil_r = r;
    }
    return HoloFn(std::move(nd2));
}

HoloFn radial_derivative(const HoloFn& f) { return f.radial(); }

std::vector<cplx> gradient(const HoloFn& f, const Point& z) { return f.gradient(z); }

std::vector<cplx> invariant_gradient(const HoloFn& f, const Point& z) {
    std::vector<cplx> g = f.gradient(z);
    double m = z.norm_sq();
    if (m == 0.0) {
        for (auto& v : g) v = -v;
        return g;
    }
    double s = std::sqrt(std::max(0.0, 1.0 - m));
    cplx rf(0.0);
    for (int k = 0; k < z.dim(); ++k) rf += g[k] * z.z[k];
    std::vector<cplx> out(z.dim());
    for (int k = 0; k < z.dim(); ++k)
        out[k] = -s * g[k] + s * (1.0 - s) * std::conj(z.z[k]) * rf / m;
    return out;
}

double invariant_gradient_norm(const HoloFn& f, const Point& z) {
    auto g = invariant_gradient(f, z);
    double s = 0.0;
    for (const auto& v : g) s += std::norm(v);
    return std::sqrt(s);
}

Field tangential_derivative(const HoloFn& f, int i, int j) {
    return [f, i, j](const Point& z) -> cplx {
        if (i == j) return cplx(0.0);
        auto g = f.gradient(z);
        return std::conj(z.z[j]) * g[i] - std::conj(z.z[i]) * g[j];
    };
}

double tangential_sum_p(const HoloFn& f, const Point& z, double p) {
    int n = z.dim();
    if (n < 2) return 0.0;
    auto g = f.gradient(z);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double m = std::abs(std::conj(z.z[j]) * g[i] - std::conj(z.z[i]) * g[j]);
            acc += std::pow(m, p);
        }
    return acc;
}

namespace {

// binomials up to C(63,k): exact in double well past the degrees used here
double binom(int64_t n, int64_t k) {
    double r = 1.0;
    for (int64_t i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

void enumerate_sub(const MultiIndex& eta, int pos, MultiIndex& m,
                   const std::function<void(const MultiIndex&)>& emit) {
    if (pos == eta.dim()) {
        emit(m);
        return;
    }
    for (int64_t v = 0; v <= eta.e[pos]; ++v) {
        m.e[pos] = v;
        enumerate_sub(eta, pos + 1, m, emit);
    }
}

}  // namespace

HoloFn gleason_A(const HoloFn& f, int k, const Point& base) {
    const PolyData* pd = f.as_polynomial();
    if (!pd) throw BallError("invalid-params", "gleason operator applies to polynomials");
    if (base.norm_sq() >= 1.0) throw BallError("invalid-params", "gleason base must be interior");
    int n = pd->n;
    // g = d_k f, then A_k f = int_0^1 g(b + t(z-b)) dt expanded coefficientwise
    PolyCoeffs g;
    for (const auto& [eta, c] : pd->c) {
        if (eta.e[k] == 0) continue;
        bool ok = true;
        g[eta.minus_axis(k, ok)] += c * double(eta.e[k]);
    }
    PolyCoeffs out;
    for (const auto& [eta, c] : g) {
        int64_t deg = eta.degree();
        MultiIndex m = MultiIndex::zero(n);
        enumerate_sub(eta, 0, m, [&](const MultiIndex& sub) {
            cplx term = c;
            for (int i = 0; i < n; ++i) {
                int64_t rest = eta.e[i] - sub.e[i];
                if (rest > 0) {
                    if (std::abs(base.z[i]) == 0.0) return;
                    term *= binom(eta.e[i], sub.e[i]) * cpow_int(base.z[i], rest);
                }
            }
            int64_t dm = sub.degree();
            // int_0^1 t^dm (1-t)^(deg-dm) dt = 1 / ((deg+1) C(deg,dm))
            term /= double(deg + 1) * binom(deg, dm);
            out[sub] += term;
        });
    }
    return HoloFn::polynomial(n, std::move(out));
}

HoloFn gleason_A(const HoloFn& f, int k) {
    const PolyData* pd = f.as_polynomial();
    if (!pd) throw BallError("invalid-params", "gleason operator applies to polynomials");
    return gleason_A(f, k, Point::zero(pd->n));
}

HoloFn riemann_stieltjes(RsKind kind, const HoloFn& g, const HoloFn& f) {
    const PolyData* fp = f.as_polynomial();
    const PolyData* gp = g.as_polynomial();
    if (!fp || !gp)
        throw BallError("invalid-params", "closed-form riemann-stieltjes needs polynomials");
    int n = fp->n;
    PolyCoeffs out;
    for (const auto& [alpha, fa] : fp->c)
        for (const auto& [beta, gb] : gp->c) {
            int64_t da = alpha.degree(), db = beta.degree();
            cplx prod = fa * gb;
            MultiIndex sum = alpha.plus(beta);
            switch (kind) {
                case RsKind::T:
                    if (da + db > 0) out[sum] += prod * double(db) / double(da + db);
                    break;
                case RsKind::L:
                    if (da + db > 0) out[sum] += prod * double(da) / double(da + db);
                    break;
                case RsKind::M: out[sum] += prod; break;
            }
        }
    return HoloFn::polynomial(n, std::move(out));
}

double hadamard_weight(const MultiIndex& eta, double d, int n) {
    return std::exp(eta.log_factorial() + boost::math::lgamma(n + d) -
                    boost::math::lgamma(n + d + double(eta.degree())));
}

HoloFn hadamard_product(const HoloFn& f, const HoloFn& g, double d) {
    if (d <= 0.0) throw BallError("invalid-params", "hadamard product needs d > 0");
    const PolyData* fp = f.as_polynomial();
    const PolyData* gp = g.as_polynomial();
    if (!fp || !gp) throw BallError("invalid-params", "hadamard product needs polynomials");
    PolyCoeffs out;
    for (const auto& [eta, fa] : fp->c) {
        auto it = gp->c.find(eta);
        if (it == gp->c.end()) continue;
        out[eta] = fa * it->second * hadamard_weight(eta, d, fp->n);
    }
    return HoloFn::polynomial(fp->n, std::move(out));
}

HoloFn randomize(const HoloFn& f, uint64_t seed) {
    if (const PolyData* pd = f.as_polynomial()) {
        PolyCoeffs out;
        uint64_t idx = 0;
        for (const auto& [eta, c] : pd->c) {
            double sign = CounterRng(seed, idx++).coin() ? 1.0 : -1.0;
            out[eta] = sign * c;
        }
        return HoloFn::polynomial(pd->n, std::move(out));
    }
    if (const LacunaryData* ld = f.as_lacunary()) {
        LacunaryData d = *ld;
        for (size_t k = 0; k < d.blocks.size(); ++k) {
            double sign = CounterRng(seed, k).coin() ? 1.0 : -1.0;
            auto& b = d.blocks[k];
            if (b.poly) {
                auto p = std::make_shared<PolyData>(*b.poly);
                for (auto& [eta, v] : p->c) v *= sign;
                b.poly = std::move(p);
            } else {
                b.coeff *= sign;
            }
        }
        return HoloFn::lacunary(std::move(d));
    }
    throw BallError("invalid-params", "randomization applies to polynomial or lacunary series");
}

}  // namespace ballspace
