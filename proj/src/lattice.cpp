#include "ballspace/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ballspace/parallel.hpp"
#include "ballspace/rng.hpp"

namespace ballspace {

namespace {

// ball point with direction uniform and hyperbolic radius uniform in
// [0, beta_max]; spreads probes evenly across metric shells
Point hyperbolic_probe(int n, double beta_max, uint64_t seed, uint64_t index) {
    CounterRng rng(seed, index);
    double beta = beta_max * rng.u01();
    double rad = std::tanh(beta);
    Point dir = sphere_point(n, CounterRng::mix(seed ^ 0xD1Cull), index);
    return rad * dir;
}

}  // namespace

std::size_t Lattice::assign(const Point& z) const {
    if (centers.empty()) throw BallError("invalid-params", "lattice has no centers");
    std::size_t best = 0;
    double best_t = -1.0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        double t = one_minus_phi_sq(centers[k], z);  // larger = closer in beta
        if (t > best_t) {
            best_t = t;
            best = k;
        }
    }
    return best;
}

double Lattice::min_pairwise_separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j)
        for (std::size_t k = j + 1; k < centers.size(); ++k)
            best = std::min(best, bergman_distance(centers[j], centers[k]));
    return best;
}

Lattice generate_lattice(int n, double r, double radius_cap, uint64_t seed) {
    if (!(r > 0.0) || r > 1.0) throw BallError("invalid-params", "separation r must be in (0,1]");
    if (!(radius_cap > 0.0) || radius_cap >= 1.0)
        throw BallError("invalid-params", "radius cap must be in (0,1)");

    Lattice lat;
    lat.n = n;
    lat.r = r;
    lat.radius_cap = radius_cap;

    double beta_max = std::atanh(radius_cap);
    double half = 0.5 * r;
    int shells = int(std::ceil(beta_max / half));
    // shell index of a center by its hyperbolic radius; centers two or more
    // shells apart are r/2-separated automatically
    std::vector<std::vector<std::size_t>> by_shell(std::size_t(shells) + 1);

    auto shell_of = [&](const Point& a) {
        double beta = std::atanh(std::min(a.norm(), radius_cap));
        return std::min(shells, int(beta / half));
    };
    auto separated = [&](const Point& cand, int sh) {
        for (int s = std::max(0, sh - 1); s <= std::min(shells, sh + 1); ++s)
            for (std::size_t idx : by_shell[std::size_t(s)])
                if (bergman_distance(lat.centers[idx], cand) < half) return false;
        return true;
    };
    auto accept = [&](const Point& cand) {
        int sh = shell_of(cand);
        by_shell[std::size_t(sh)].push_back(lat.centers.size());
        lat.centers.push_back(cand);
    };

    accept(Point::zero(n));

    const int kGiveUp = 200;  // consecutive rejections before a shell is called full
    uint64_t draw = 0;
    for (int sh = 0; sh <= shells; ++sh) {
        double lo = sh * half;
        double hi = std::min(beta_max, (sh + 1) * half);
        if (hi <= lo) continue;
        int rejects = 0;
        while (rejects < kGiveUp) {
            CounterRng rng(CounterRng::mix(seed ^ 0x5A77Cull), draw++);
            double beta = lo + (hi - lo) * rng.u01();
            Point cand = std::tanh(beta) * sphere_point(n, CounterRng::mix(seed ^ 0xD12Cull), draw);
            if (separated(cand, sh)) {
                accept(cand);
                rejects = 0;
            } else {
                ++rejects;
            }
        }
    }

    // covering repair: any probe farther than r from every center is itself
    // r-separated, so adding it preserves the separation invariant
    auto probes = lattice_probes(n, radius_cap, 4096, CounterRng::mix(seed ^ 0x9999ull));
    bool added = true;
    while (added) {
        added = false;
        for (const auto& pt : probes) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : lat.centers)
                best = std::min(best, bergman_distance(c, pt));
            if (best > r) {
                accept(pt);
                added = true;
            }
        }
    }
    return lat;
}

std::vector<Point> lattice_probes(int n, double radius_cap, std::size_t count, uint64_t seed) {
    double beta_max = std::atanh(radius_cap);
    std::vector<Point> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = hyperbolic_probe(n, beta_max, seed, uint64_t(i));
    return out;
}

double covering_radius(const Lattice& lat, const std::vector<Point>& probes) {
    double worst = 0.0;
    for (const auto& pt : probes) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : lat.centers) best = std::min(best, bergman_distance(c, pt));
        worst = std::max(worst, best);
    }
    return worst;
}

int max_overlap(const Lattice& lat, double radius_mult, const std::vector<Point>& probes) {
    int worst = 0;
    for (const auto& pt : probes) {
        int hits = 0;
        for (const auto& c : lat.centers)
            if (bergman_distance(c, pt) <= radius_mult * lat.r) ++hits;
        worst = std::max(worst, hits);
    }
    return worst;
}

IntegralEstimate operator_T(const RealField& f, double b, const Point& z, std::int64_t budget,
                            uint64_t seed) {
    int n = z.dim();
    if (!(b > n)) throw BallError("invalid-params", "kernel exponent must exceed n");
    if (z.norm_sq() >= 1.0) throw BallError("invalid-params", "evaluation point must be interior");
    double bias = std::max(-0.95, std::min(50.0, b - n - 1.0));
    RealField g = [&](const Point& w) {
        double om = 1.0 - w.norm_sq();
        double ker = std::norm(cplx(1.0) - inner(z, w));  // |1-<z,w>|^2
        return std::pow(om, b - n - 1.0) * std::pow(ker, -0.5 * b) * f(w);
    };
    return integrate(g, MeasureSpec::volume(), n, budget, seed, bias);
}

HoloFn operator_S(const std::function<cplx(const Point&)>& f, const Lattice& lat, double b,
                  std::int64_t budget, uint64_t seed) {
    if (lat.centers.empty()) return HoloFn();
    int n = lat.n;
    if (!(b > n)) throw BallError("invalid-params", "kernel exponent must exceed n");
    double alpha = b - (n + 1.0);
    double calpha = MeasureSpec::weighted_volume(alpha).normalizer(n);
    double bias = std::max(-0.95, std::min(50.0, alpha));
    double log_norm = radial_bias_log_norm(n, bias);

    /* One shared pass; each sample lands in exactly one cell.  The cells
     * partition the whole ball (the cap truncates the centers only), so the
     * masses sum to V_alpha(B) = 1 up to MC error. */
    std::vector<double> mass(lat.centers.size(), 0.0);
    for (std::int64_t i = 0; i < budget; ++i) {
        WeightedSample ws = ball_sample(n, seed, uint64_t(i), bias, log_norm);
        double om = 1.0 - ws.z.norm_sq();
        mass[lat.assign(ws.z)] += ws.weight * calpha * std::pow(om, alpha);
    }
    for (double& m : mass) m /= double(budget);

    AtomicSumData data;
    data.b = b;
    for (std::size_t k = 0; k < lat.centers.size(); ++k) {
        const Point& a = lat.centers[k];
        cplx c = mass[k] * f(a) / std::pow(1.0 - a.norm_sq(), b);
        data.atoms.push_back({c, a});
    }
    return HoloFn::atomic_sum(std::move(data));
}

double atomic_b_threshold(const SpaceParams& params) {
    double tail = params.q + params.ns();
    if (params.p == 1.0) return tail;
    double pprime = params.p / (params.p - 1.0);
    return (params.n + 1.0) / pprime + tail / params.p;
}

HoloFn atomic_synthesize(const AtomicSumData& data) {
    if (!(data.b > 0.0)) throw BallError("invalid-params", "atomic exponent must be > 0");
    return data.atoms.empty() ? HoloFn() : HoloFn::atomic_sum(data);
}

NormEstimate atomic_carleson_check(const AtomicSumData& data, const SpaceParams& params,
                                   const GridOptions& grid) {
    int n = data.atoms.empty() ? params.n : data.atoms.front().a.dim();
    if (n != params.n) throw BallError("invalid-params", "atom dimension does not match the space");
    std::vector<std::pair<Point, double>> atoms;
    double tail = params.q + params.ns();
    for (const auto& at : data.atoms) {
        double om = 1.0 - at.a.norm_sq();
        atoms.push_back({at.a, std::pow(std::abs(at.c), params.p) * std::pow(om, tail)});
    }
    CarlesonMeasure mu = CarlesonMeasure::from_atoms(n, std::move(atoms));
    return carleson_norm(mu, params.ns(), CarlesonMode::TentSup, grid);
}

}  // namespace ballspace
