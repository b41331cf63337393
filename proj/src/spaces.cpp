#include "ballspace/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "ballspace/parallel.hpp"
#include "ballspace/rng.hpp"

namespace ballspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTau = 6.283185307179586476925286766559;

double clamp_bias(double g) { return std::min(0.0, std::max(-0.95, g)); }

}  // namespace

SpaceSpec SpaceSpec::N_space(const SpaceParams& params, NForm form) {
    SpaceSpec s;
    s.kind = Kind::N;
    s.n = params.n;
    s.params = params;
    s.form = form;
    return s;
}

SpaceSpec SpaceSpec::Nstar_space(const SpaceParams& params) {
    if (params.n < 2)
        throw BallError("unsupported-dimension", "the starred space needs n >= 2");
    SpaceSpec s;
    s.kind = Kind::Nstar;
    s.n = params.n;
    s.params = params;
    return s;
}

SpaceSpec SpaceSpec::bergman_type(int n, double l) {
    if (l <= 0.0) throw BallError("invalid-params", "growth exponent l must be > 0");
    SpaceSpec s;
    s.kind = Kind::BergmanType;
    s.n = n;
    s.l = l;
    return s;
}

SpaceSpec SpaceSpec::bergman(int n, double p, double alpha) {
    if (p < 1.0) throw BallError("invalid-params", "Bergman p must be >= 1");
    SpaceSpec s;
    s.kind = Kind::Bergman;
    s.n = n;
    s.p = p;
    s.alpha = alpha;
    return s;
}

SpaceSpec SpaceSpec::bloch(int n, double alpha) {
    if (alpha <= 0.0) throw BallError("invalid-params", "Bloch alpha must be > 0");
    SpaceSpec s;
    s.kind = Kind::Bloch;
    s.n = n;
    s.alpha = alpha;
    return s;
}

SpaceSpec SpaceSpec::weighted_hardy(int n, double alpha, double beta) {
    if (alpha <= 0.0 || beta <= 0.0)
        throw BallError("invalid-params", "weighted Hardy space needs alpha > 0, beta > 0");
    SpaceSpec s;
    s.kind = Kind::WeightedHardy;
    s.n = n;
    s.alpha = alpha;
    s.beta = beta;
    return s;
}

SpaceSpec SpaceSpec::tent_space(int n, double m, double l) {
    if (m <= 0.0 || l <= 0.0) throw BallError("invalid-params", "tent space needs m > 0, l > 0");
    SpaceSpec s;
    s.kind = Kind::Tent;
    s.n = n;
    s.m = m;
    s.l = l;
    return s;
}

std::string SpaceSpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::N:
            os << "N[I" << (int(form) + 1) << ",n=" << params.n << ",p=" << params.p
               << ",q=" << params.q << ",s=" << params.s << "]";
            break;
        case Kind::Nstar:
            os << "Nstar[n=" << params.n << ",p=" << params.p << ",q=" << params.q
               << ",s=" << params.s << "]";
            break;
        case Kind::BergmanType: os << "A^-l[n=" << n << ",l=" << l << "]"; break;
        case Kind::Bergman: os << "Bergman[n=" << n << ",p=" << p << ",alpha=" << alpha << "]"; break;
        case Kind::Bloch: os << "Bloch[n=" << n << ",alpha=" << alpha << "]"; break;
        case Kind::WeightedHardy:
            os << "Hardy[n=" << n << ",alpha=" << alpha << ",beta=" << beta << "]";
            break;
        case Kind::Tent: os << "Tent[n=" << n << ",m=" << m << ",l=" << l << "]"; break;
    }
    return os.str();
}

double SpaceSpec::homogeneity_power() const {
    switch (kind) {
        case Kind::N:
        case Kind::Nstar: return params.p;
        case Kind::Bergman: return p;
        case Kind::Tent: return m;
        default: return 1.0;
    }
}

int GridOptions::resolved_dirs(int n) const {
    if (dirs > 0) return dirs;
    return n == 1 ? 16 : 64;
}

std::vector<double> GridOptions::resolved_radii() const {
    if (!radii.empty()) {
        for (double r : radii)
            if (r < 0.0 || r >= 1.0)
                throw BallError("invalid-params", "grid radii must lie in [0,1)");
        return radii;
    }
    return {0.0, 0.3, 0.6, 0.8, 0.9, 0.95, 0.99};
}

std::vector<Point> grid_directions(int n, int dirs) {
    std::vector<Point> out;
    out.reserve(dirs);
    if (n == 1) {
        for (int j = 0; j < dirs; ++j) {
            double th = kTau * j / dirs;
            out.push_back(Point({cplx(std::cos(th), std::sin(th))}));
        }
        return out;
    }
    // fixed quasi-random set, independent of the user seed so frozen
    // calibration constants keep meaning across runs
    for (int j = 0; j < dirs; ++j) out.push_back(sphere_point(n, 0xBA115EEDull, uint64_t(j)));
    return out;
}

std::vector<Point> sup_grid(int n, const GridOptions& grid) {
    auto dirs = grid_directions(n, grid.resolved_dirs(n));
    auto radii = grid.resolved_radii();
    std::vector<Point> pts;
    for (double r : radii) {
        if (r == 0.0) {
            pts.push_back(Point::zero(n));
            continue;
        }
        for (const auto& d : dirs) pts.push_back(r * d);
    }
    return pts;
}

std::vector<double> carleson_delta_grid() {
    std::vector<double> out;
    for (int j = -1; j <= 10; ++j) out.push_back(std::ldexp(1.0, -j));
    return out;  // 2, 1, 1/2, ..., 2^-10
}

// ---------------------------------------------------------------------------
// sup-over-grid engine with one refinement pass around the running argmax

namespace {

struct SupResult {
    double best = 0.0;
    double best_sigma = 0.0;
    Point argmax;
    std::size_t grid_size = 0;
    bool at_rim = false;
    std::vector<GridValue> detail;
};

using PointEval = std::function<std::pair<double, double>(const Point&)>;

std::vector<Point> neighbor_dirs(const Point& xi, int n, int base_dirs) {
    std::vector<Point> out;
    if (n == 1) {
        double th0 = std::arg(xi.z[0]);
        double spacing = kTau / base_dirs;
        for (int k = -4; k <= 4; ++k) {
            if (k == 0) continue;
            double th = th0 + k * spacing / 5.0;
            out.push_back(Point({cplx(std::cos(th), std::sin(th))}));
        }
        return out;
    }
    for (int j = 0; j < 8; ++j) {
        Point u = sphere_point(n, 0xD1FF5EEDull, uint64_t(j));
        Point v = xi;
        for (int k = 0; k < n; ++k) v.z[k] += 0.35 * u.z[k];
        out.push_back(v.normalized());
    }
    return out;
}

SupResult sup_over_grid(int n, const GridOptions& grid, const PointEval& eval_pt) {
    auto dirs = grid_directions(n, grid.resolved_dirs(n));
    auto radii = grid.resolved_radii();
    SupResult res;
    res.argmax = Point::zero(n);

    auto consider = [&](const Point& a) {
        auto [v, sig] = eval_pt(a);
        res.detail.push_back({a, v, sig});
        if (v > res.best) {
            res.best = v;
            res.best_sigma = sig;
            res.argmax = a;
        }
    };

    for (double r : radii) {
        if (r == 0.0) {
            consider(Point::zero(n));
            continue;
        }
        for (const auto& d : dirs) consider(r * d);
    }

    if (grid.refine && res.best > 0.0) {
        double br = res.argmax.norm();
        Point bdir = br > 1e-12 ? res.argmax.normalized() : dirs.front();
        // halve the radial spacing around the best radius
        std::vector<double> rref;
        auto it = std::min_element(radii.begin(), radii.end(), [&](double a, double b) {
            return std::abs(a - br) < std::abs(b - br);
        });
        std::size_t ri = std::size_t(it - radii.begin());
        if (ri > 0) rref.push_back(0.5 * (radii[ri - 1] + radii[ri]));
        rref.push_back(radii[ri]);
        double next = ri + 1 < radii.size() ? radii[ri + 1] : 1.0;
        rref.push_back(std::min(0.995, 0.5 * (radii[ri] + next)));
        std::vector<Point> nd = neighbor_dirs(bdir, n, grid.resolved_dirs(n));
        nd.push_back(bdir);
        for (double r : rref)
            for (const auto& d : nd)
                if (r > 0.0) consider(r * d);
    }

    res.grid_size = res.detail.size();
    double rim = radii.back();
    res.at_rim = res.argmax.norm() >= rim - 1e-12;
    return res;
}

// ---------------------------------------------------------------------------
// invariant Green function: cubic spline of h(t) = g(t) t^(2n-2) / (1-t^2)^n,
// which is smooth on [0,1] while g itself blows up at 0

struct Spline {
    std::vector<double> x, y, m;  // second derivatives m

    double eval(double t) const {
        if (t <= x.front()) return y.front();
        if (t >= x.back()) return y.back();
        std::size_t hi = std::size_t(std::upper_bound(x.begin(), x.end(), t) - x.begin());
        std::size_t lo = hi - 1;
        double h = x[hi] - x[lo];
        double A = (x[hi] - t) / h, B = (t - x[lo]) / h;
        return A * y[lo] + B * y[hi] +
               ((A * A * A - A) * m[lo] + (B * B * B - B) * m[hi]) * h * h / 6.0;
    }
};

Spline natural_spline(std::vector<double> x, std::vector<double> y) {
    std::size_t n = x.size();
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    b[0] = 1.0;
    b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        a[i] = h0 / 6.0;
        b[i] = (h0 + h1) / 3.0;
        c[i] = h1 / 6.0;
        d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    // Thomas algorithm
    for (std::size_t i = 1; i < n; ++i) {
        double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    std::vector<double> m(n, 0.0);
    m[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
    return Spline{std::move(x), std::move(y), std::move(m)};
}

const Spline& green_h_spline(int n) {
    static std::map<int, Spline> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const int K = 256;
    std::vector<double> x(K + 1), y(K + 1);
    for (int j = 0; j <= K; ++j) {
        double t = double(j) / K;
        x[j] = t;
        if (j == 0) {
            y[j] = (n + 1.0) / (2.0 * n * (2.0 * n - 2.0));
        } else if (j == K) {
            y[j] = (n + 1.0) / (4.0 * n * n);
        } else {
            y[j] = green_function_radial(n, t) * std::pow(t, 2 * n - 2) /
                   std::pow(1.0 - t * t, n);
        }
    }
    return cache.emplace(n, natural_spline(std::move(x), std::move(y))).first->second;
}

// ---------------------------------------------------------------------------
// shared ball samples with the per-sample form integrand

struct FormSamples {
    std::vector<Point> z;
    std::vector<double> om;  // 1 - |z|^2
    std::vector<double> base;  // integrand without the automorphism factor
};

double inv_grad_norm_from(const std::vector<cplx>& g, const Point& z) {
    double m = z.norm_sq();
    if (m == 0.0) {
        double s = 0.0;
        for (const auto& v : g) s += std::norm(v);
        return std::sqrt(s);
    }
    double sq = std::sqrt(std::max(0.0, 1.0 - m));
    cplx rf(0.0);
    for (int k = 0; k < z.dim(); ++k) rf += g[k] * z.z[k];
    double s = 0.0;
    for (int k = 0; k < z.dim(); ++k)
        s += std::norm(-sq * g[k] + sq * (1.0 - sq) * std::conj(z.z[k]) * rf / m);
    return std::sqrt(s);
}

double tangential_sum_from(const std::vector<cplx>& g, const Point& z, double p) {
    int n = z.dim();
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            acc += std::pow(std::abs(std::conj(z.z[j]) * g[i] - std::conj(z.z[i]) * g[j]), p);
    return acc;
}

FormSamples draw_form_samples(const HoloFn& f, const SpaceParams& pr, NForm form,
                              std::int64_t budget, uint64_t seed) {
    int n = pr.n;
    double gamma = clamp_bias(pr.q - n - 1.0);
    double log_norm = radial_bias_log_norm(n, gamma);
    FormSamples s;
    s.z.resize(budget);
    s.om.resize(budget);
    s.base.resize(budget);
    parallel_for(budget, [&](std::int64_t i) {
        WeightedSample ws = ball_sample(n, seed, uint64_t(i), gamma, log_norm);
        double om = 1.0 - ws.z.norm_sq();
        double core = 0.0, wexp = 0.0;
        switch (form) {
            case NForm::I1:
                core = std::pow(std::abs(f.eval(ws.z)), pr.p);
                wexp = pr.q - (n + 1.0);
                break;
            case NForm::I2: {
                auto g = f.gradient(ws.z);
                double m = 0.0;
                for (const auto& v : g) m += std::norm(v);
                core = std::pow(std::sqrt(m), pr.p);
                wexp = pr.p + pr.q - (n + 1.0);
                break;
            }
            case NForm::I3: {
                auto g = f.gradient(ws.z);
                cplx rf(0.0);
                for (int k = 0; k < n; ++k) rf += g[k] * ws.z.z[k];
                core = std::pow(std::abs(rf), pr.p);
                wexp = pr.p + pr.q - (n + 1.0);
                break;
            }
            case NForm::I4: {
                auto g = f.gradient(ws.z);
                core = std::pow(inv_grad_norm_from(g, ws.z), pr.p);
                wexp = pr.q - (n + 1.0);
                break;
            }
            case NForm::I5: {
                auto g = f.gradient(ws.z);
                core = tangential_sum_from(g, ws.z, pr.p);
                wexp = 0.5 * pr.p + pr.q - (n + 1.0);
                break;
            }
        }
        s.z[i] = ws.z;
        s.om[i] = om;
        s.base[i] = ws.weight * core * std::pow(om, wexp);
    });
    return s;
}

std::pair<double, double> moebius_weighted_mean(const FormSamples& s, const Point& a,
                                                double exponent) {
    double oma = 1.0 - a.norm_sq();
    std::int64_t count = std::int64_t(s.z.size());
    auto sums = blocked_sum<2>(count, [&](std::int64_t i) -> std::array<double, 2> {
        cplx d = cplx(1.0) - inner(s.z[i], a);
        double t = oma * s.om[i] / std::norm(d);
        double term = s.base[i] * std::exp(exponent * std::log(t));
        return {term, term * term};
    });
    double mean = sums[0] / count;
    double var = std::max(0.0, sums[1] / count - mean * mean);
    return {mean, std::sqrt(var / count)};
}

std::pair<double, double> green_weighted_mean(const FormSamples& s, const Point& a,
                                              double sexp, int n, const Spline& hs) {
    double oma = 1.0 - a.norm_sq();
    std::int64_t count = std::int64_t(s.z.size());
    auto sums = blocked_sum<2>(count, [&](std::int64_t i) -> std::array<double, 2> {
        cplx d = cplx(1.0) - inner(s.z[i], a);
        double t = oma * s.om[i] / std::norm(d);
        double t2 = std::max(1e-300, 1.0 - t);  // |Phi_a(z)|^2
        double logG = std::log(hs.eval(std::sqrt(std::min(1.0, t2)))) + n * std::log(t) -
                      (n - 1.0) * std::log(t2);
        double term = s.base[i] * std::exp(sexp * logG);
        return {term, term * term};
    });
    double mean = sums[0] / count;
    double var = std::max(0.0, sums[1] / count - mean * mean);
    return {mean, std::sqrt(var / count)};
}

NormEstimate finish_sup(SupResult&& res, double addend, double root) {
    NormEstimate est;
    est.argmax = res.argmax;
    est.grid_size = res.grid_size;
    est.detail = std::move(res.detail);
    double raw = res.best + addend;
    est.value = root == 1.0 ? raw : std::pow(raw, 1.0 / root);
    if (raw > 0.0 && root != 1.0)
        est.std_error = res.best_sigma / root * std::pow(raw, 1.0 / root - 1.0);
    else
        est.std_error = res.best_sigma;
    est.reliable = res.best <= 0.0 || res.best_sigma <= 0.1 * res.best;
    if (res.at_rim) est.status = "argmax-at-rim";
    return est;
}

uint64_t cell_seed(uint64_t seed, uint64_t a, uint64_t b) {
    return CounterRng::mix(seed ^ (0x7E47A11ull + a * 0x100000001B3ull + b));
}

}  // namespace

// ---------------------------------------------------------------------------

CarlesonMeasure CarlesonMeasure::from_atoms(int n, std::vector<std::pair<Point, double>> atoms) {
    for (const auto& [a, w] : atoms) {
        if (a.dim() != n) throw BallError("invalid-params", "atom dimension mismatch");
        if (a.norm_sq() >= 1.0) throw BallError("invalid-params", "atoms must be interior");
        if (!(w >= 0.0)) throw BallError("invalid-params", "atom weights must be >= 0");
    }
    CarlesonMeasure mu;
    mu.n = n;
    mu.atoms = std::move(atoms);
    return mu;
}

CarlesonMeasure CarlesonMeasure::from_density(int n, std::function<double(const Point&)> density,
                                              double tail_exp) {
    CarlesonMeasure mu;
    mu.n = n;
    mu.density = std::move(density);
    mu.tail_exp = tail_exp;
    return mu;
}

double CarlesonMeasure::total_atom_mass() const {
    double t = 0.0;
    for (const auto& [a, w] : atoms) t += w;
    return t;
}

// ---------------------------------------------------------------------------

TubeStratum tube_stratum(const Point& xi_in, double delta, int n, std::int64_t count,
                         uint64_t seed, double tail_exp) {
    if (!(delta > 0.0) || delta > 2.0)
        throw BallError("invalid-params", "tube aperture must lie in (0,2]");
    if (count < 1) throw BallError("invalid-params", "empty tube stratum");
    Point xi = xi_in.normalized();

    // orthonormal completion of xi by Gram-Schmidt over coordinate axes
    std::vector<Point> cols{xi};
    for (int k = 0; k < n && int(cols.size()) < n; ++k) {
        Point v = Point::zero(n);
        v.z[k] = 1.0;
        for (const auto& c : cols) {
            cplx pr = inner(v, c);
            for (int j = 0; j < n; ++j) v.z[j] -= pr * c.z[j];
        }
        if (v.norm() > 1e-6) cols.push_back(v.normalized());
    }

    double gamma_v = n >= 2 ? std::max(-0.95, tail_exp - n - 1.0) : 0.0;
    double log_norm_v = n >= 2 ? radial_bias_log_norm(n - 1, gamma_v) : 0.0;
    uint64_t vseed = CounterRng::mix(seed ^ 0xCAB1E5ull);

    TubeStratum st;
    st.xi = xi;
    st.delta = delta;
    st.z.assign(count, Point::zero(n));
    st.w.assign(count, 0.0);
    parallel_for(count, [&](std::int64_t i) {
        CounterRng rng(seed, uint64_t(i));
        double rho = std::sqrt(rng.u01());
        double phi = kTau * rng.u01();
        cplx lambda = cplx(1.0) + delta * cplx(rho * std::cos(phi), rho * std::sin(phi));
        double l2 = std::norm(lambda);
        if (l2 >= 1.0) return;  // proposal left the ball; weight stays 0
        double slam = std::sqrt(1.0 - l2);
        Point z = Point::zero(n);
        double w = double(n) * delta * delta / ((1.0 - l2) * (1.0 - l2));
        if (n == 1) {
            z.z[0] = lambda * xi.z[0];
        } else {
            WeightedSample vs = ball_sample(n - 1, vseed, uint64_t(i), gamma_v, log_norm_v);
            double omv = 1.0 - vs.z.norm_sq();
            w *= vs.weight * std::pow(omv, -(n + 1.0));
            for (int m = 0; m < n; ++m) {
                cplx acc = lambda * cols[0].z[m];
                for (int j = 0; j + 1 < n; ++j) acc += slam * vs.z.z[j] * cols[j + 1].z[m];
                z.z[m] = acc;
            }
        }
        st.z[i] = z;
        st.w[i] = w;
    });
    return st;
}

// ---------------------------------------------------------------------------

NormEstimate carleson_norm(const CarlesonMeasure& mu, double exponent, CarlesonMode mode,
                           const GridOptions& grid, std::int64_t budget, uint64_t seed) {
    if (!(exponent > 0.0)) throw BallError("invalid-params", "carleson exponent must be > 0");
    int n = mu.n;

    if (!mu.is_density()) {
        if (mode == CarlesonMode::TentSup) {
            // exact sweep: candidate apertures are the atom offsets themselves
            std::vector<Point> dirs = grid_directions(n, grid.resolved_dirs(n));
            for (const auto& [a, w] : mu.atoms)
                if (a.norm() > 1e-12) dirs.push_back(a.normalized());
            NormEstimate est;
            est.argmax = Point::zero(n);
            est.status = "exact-sweep";
            est.grid_size = dirs.size();
            for (const auto& xi : dirs) {
                std::vector<std::pair<double, double>> offs;  // (delta_k, weight)
                offs.reserve(mu.atoms.size());
                for (const auto& [a, w] : mu.atoms) {
                    if (w == 0.0) continue;
                    offs.push_back({std::abs(cplx(1.0) - inner(a, xi)), w});
                }
                std::sort(offs.begin(), offs.end());
                double mass = 0.0;
                for (std::size_t k = 0; k < offs.size(); ++k) {
                    mass += offs[k].second;
                    if (k + 1 < offs.size() && offs[k + 1].first == offs[k].first) continue;
                    double ratio = mass / std::pow(offs[k].first, exponent);
                    if (ratio > est.value) {
                        est.value = ratio;
                        est.argmax = xi;
                        est.argmax_delta = offs[k].first;
                    }
                }
            }
            return est;
        }
        // moebius_sup over the a-grid, exact finite sums
        auto eval_pt = [&](const Point& a) -> std::pair<double, double> {
            double acc = 0.0;
            double oma = 1.0 - a.norm_sq();
            for (const auto& [ak, w] : mu.atoms) {
                cplx d = cplx(1.0) - inner(ak, a);
                acc += w * std::pow(oma / std::norm(d), exponent);
            }
            return {acc, 0.0};
        };
        NormEstimate est = finish_sup(sup_over_grid(n, grid, eval_pt), 0.0, 1.0);
        if (est.status.empty()) est.status = "grid-sup";
        return est;
    }

    if (mode == CarlesonMode::TentSup) {
        auto dirs = grid_directions(n, grid.resolved_dirs(n));
        auto deltas = carleson_delta_grid();
        double wsum = 0.0;
        for (double d : deltas) wsum += 1.0 / std::sqrt(d);
        NormEstimate est;
        est.argmax = Point::zero(n);
        for (std::size_t di = 0; di < dirs.size(); ++di) {
            for (std::size_t dj = 0; dj < deltas.size(); ++dj) {
                double delta = deltas[dj];
                std::int64_t cnt = std::max<std::int64_t>(
                    64, std::int64_t(double(budget) / (std::sqrt(delta) * wsum)));
                TubeStratum st =
                    tube_stratum(dirs[di], delta, n, cnt, cell_seed(seed, di, dj), mu.tail_exp);
                auto sums = blocked_sum<2>(cnt, [&](std::int64_t i) -> std::array<double, 2> {
                    double v = st.w[i] == 0.0 ? 0.0 : st.w[i] * mu.density(st.z[i]);
                    return {v, v * v};
                });
                double mean = sums[0] / cnt;
                double var = std::max(0.0, sums[1] / cnt - mean * mean);
                double ratio = mean / std::pow(delta, exponent);
                double sig = std::sqrt(var / cnt) / std::pow(delta, exponent);
                est.detail.push_back({dirs[di], ratio, sig});
                if (ratio > est.value) {
                    est.value = ratio;
                    est.std_error = sig;
                    est.argmax = dirs[di];
                    est.argmax_delta = delta;
                }
            }
        }
        est.grid_size = est.detail.size();
        est.reliable = est.value <= 0.0 || est.std_error <= 0.2 * est.value;
        return est;
    }

    // density, moebius_sup: one shared ball-sample pass
    double gamma = clamp_bias(mu.tail_exp - n - 1.0);
    double log_norm = radial_bias_log_norm(n, gamma);
    std::vector<Point> zs(budget);
    std::vector<double> om(budget), base(budget);
    parallel_for(budget, [&](std::int64_t i) {
        WeightedSample ws = ball_sample(n, seed, uint64_t(i), gamma, log_norm);
        zs[i] = ws.z;
        om[i] = 1.0 - ws.z.norm_sq();
        base[i] = ws.weight * mu.density(ws.z) * std::pow(om[i], -(n + 1.0));
    });
    auto eval_pt = [&](const Point& a) -> std::pair<double, double> {
        double oma = 1.0 - a.norm_sq();
        auto sums = blocked_sum<2>(budget, [&](std::int64_t i) -> std::array<double, 2> {
            cplx d = cplx(1.0) - inner(zs[i], a);
            double t = oma / std::norm(d);
            double term = base[i] * std::exp(exponent * std::log(t));
            return {term, term * term};
        });
        double mean = sums[0] / budget;
        double var = std::max(0.0, sums[1] / budget - mean * mean);
        return {mean, std::sqrt(var / budget)};
    };
    return finish_sup(sup_over_grid(n, grid, eval_pt), 0.0, 1.0);
}

// ---------------------------------------------------------------------------

NormEstimate norm(const SpaceSpec& space, const HoloFn& f, std::int64_t budget, uint64_t seed,
                  const GridOptions& grid) {
    if (f.dim() != space.n)
        throw BallError("invalid-params", "function dimension does not match the space");
    if (budget < 1) throw BallError("invalid-params", "empty budget");
    int n = space.n;

    if (f.is_zero()) {
        NormEstimate est;
        est.argmax = Point::zero(n);
        return est;
    }

    switch (space.kind) {
        case SpaceSpec::Kind::N: {
            const SpaceParams& pr = space.params;
            if (f.is_polynomial() && !pr.polynomial_ok) {
                NormEstimate est;
                est.value = kInf;
                est.argmax = Point::zero(n);
                est.status = "divergent-by-theory";
                return est;
            }
            FormSamples s = draw_form_samples(f, pr, space.form, budget, seed);
            auto eval_pt = [&](const Point& a) { return moebius_weighted_mean(s, a, pr.ns()); };
            double addend =
                space.form == NForm::I1 ? 0.0 : std::pow(std::abs(f.at_zero()), pr.p);
            NormEstimate est = finish_sup(sup_over_grid(n, grid, eval_pt), addend, pr.p);
            if (space.form == NForm::I5 && n == 1) est.status = "degenerate-form";
            return est;
        }
        case SpaceSpec::Kind::Nstar: {
            const SpaceParams& pr = space.params;
            if (!pr.green_ok) {
                NormEstimate est;
                est.value = kInf;
                est.argmax = Point::zero(n);
                est.status = "divergent-by-theory";
                return est;
            }
            const Spline& hs = green_h_spline(n);
            FormSamples s = draw_form_samples(f, pr, NForm::I1, budget, seed);
            auto eval_pt = [&](const Point& a) {
                return green_weighted_mean(s, a, pr.s, n, hs);
            };
            return finish_sup(sup_over_grid(n, grid, eval_pt), 0.0, pr.p);
        }
        case SpaceSpec::Kind::BergmanType: {
            auto eval_pt = [&](const Point& a) -> std::pair<double, double> {
                double om = 1.0 - a.norm_sq();
                return {std::abs(f.eval(a)) * std::pow(om, space.l), 0.0};
            };
            return finish_sup(sup_over_grid(n, grid, eval_pt), 0.0, 1.0);
        }
        case SpaceSpec::Kind::Bloch: {
            HoloFn rf = f.radial();
            auto eval_pt = [&](const Point& a) -> std::pair<double, double> {
                double om = 1.0 - a.norm_sq();
                return {std::abs(rf.eval(a)) * std::pow(om, space.alpha), 0.0};
            };
            return finish_sup(sup_over_grid(n, grid, eval_pt), std::abs(f.at_zero()), 1.0);
        }
        case SpaceSpec::Kind::Bergman: {
            double p = space.p, alpha = space.alpha;
            HoloFn g = f;
            int order = 0;
            double addend = 0.0;
            double wexp = alpha;
            if (alpha <= -1.0) {
                // higher-derivative convention: smallest N with pN + alpha > -1
                order = int(std::floor((-1.0 - alpha) / p)) + 1;
                for (int j = 0; j < order; ++j) g = g.radial();
                addend = std::pow(std::abs(f.at_zero()), p);
                wexp = p * order + alpha;
            }
            MeasureSpec meas = MeasureSpec::weighted_volume(wexp);
            RealField field = [&](const Point& z) { return std::pow(std::abs(g.eval(z)), p); };
            double bias = std::max(-0.95, std::min(50.0, wexp));
            IntegralEstimate ie = n == 1 ? integrate_product_n1(field, meas)
                                         : integrate(field, meas, n, budget, seed, bias);
            NormEstimate est;
            est.argmax = Point::zero(n);
            double raw = std::max(0.0, ie.value) + addend;
            est.value = std::pow(raw, 1.0 / p);
            est.std_error =
                raw > 0.0 ? ie.std_error / p * std::pow(raw, 1.0 / p - 1.0) : ie.std_error;
            est.reliable = ie.reliable;
            est.grid_size = 1;
            est.detail.push_back({Point::zero(n), raw, ie.std_error});
            return est;
        }
        case SpaceSpec::Kind::WeightedHardy: {
            auto radii = grid.resolved_radii();
            auto feval = [&f](const Point& z) { return f.eval(z); };
            auto value_at = [&](double r) {
                return std::pow(1.0 - r, space.beta) *
                       radial_mean(feval, n, r, space.alpha, budget, seed);
            };
            NormEstimate est;
            est.argmax = Point::zero(n);
            double best_r = 0.0;
            for (double r : radii) {
                double v = value_at(r);
                est.detail.push_back({r * grid_directions(n, 1).front(), v, 0.0});
                if (v > est.value) {
                    est.value = v;
                    best_r = r;
                }
            }
            if (grid.refine) {
                auto it = std::find(radii.begin(), radii.end(), best_r);
                std::size_t ri = std::size_t(it - radii.begin());
                std::vector<double> rref;
                if (ri > 0) rref.push_back(0.5 * (radii[ri - 1] + radii[ri]));
                double next = ri + 1 < radii.size() ? radii[ri + 1] : 1.0;
                rref.push_back(std::min(0.995, 0.5 * (radii[ri] + next)));
                for (double r : rref) {
                    double v = value_at(r);
                    est.detail.push_back({r * grid_directions(n, 1).front(), v, 0.0});
                    if (v > est.value) {
                        est.value = v;
                        best_r = r;
                    }
                }
            }
            est.argmax = best_r * grid_directions(n, 1).front();
            est.grid_size = est.detail.size();
            if (best_r >= radii.back() - 1e-12) est.status = "argmax-at-rim";
            return est;
        }
        case SpaceSpec::Kind::Tent: {
            auto dirs = grid_directions(n, grid.resolved_dirs(n));
            auto deltas = carleson_delta_grid();
            double wsum = 0.0;
            for (double d : deltas) wsum += 1.0 / std::sqrt(d);
            NormEstimate est;
            est.argmax = Point::zero(n);
            double best_raw = 0.0, best_sig = 0.0;
            for (std::size_t di = 0; di < dirs.size(); ++di)
                for (std::size_t dj = 0; dj < deltas.size(); ++dj) {
                    double delta = deltas[dj];
                    std::int64_t cnt = std::max<std::int64_t>(
                        64, std::int64_t(double(budget) / (std::sqrt(delta) * wsum)));
                    TubeStratum st = tube_stratum(dirs[di], delta, n, cnt,
                                                  cell_seed(seed, di, dj), double(n + 1));
                    auto sums =
                        blocked_sum<2>(cnt, [&](std::int64_t i) -> std::array<double, 2> {
                            if (st.w[i] == 0.0) return {0.0, 0.0};
                            double omz = 1.0 - st.z[i].norm_sq();
                            // measure dV against the tube's dlambda weights
                            double v = st.w[i] * std::pow(std::abs(f.eval(st.z[i])), space.m) *
                                       std::pow(omz, n + 1.0);
                            return {v, v * v};
                        });
                    double mean = sums[0] / cnt;
                    double var = std::max(0.0, sums[1] / cnt - mean * mean);
                    double ratio = mean / std::pow(delta, n * space.l);
                    double sig = std::sqrt(var / cnt) / std::pow(delta, n * space.l);
                    est.detail.push_back({dirs[di], ratio, sig});
                    if (ratio > best_raw) {
                        best_raw = ratio;
                        best_sig = sig;
                        est.argmax = dirs[di];
                        est.argmax_delta = delta;
                    }
                }
            est.grid_size = est.detail.size();
            est.value = std::pow(best_raw, 1.0 / space.m);
            est.std_error = best_raw > 0.0
                                ? best_sig / space.m * std::pow(best_raw, 1.0 / space.m - 1.0)
                                : 0.0;
            est.reliable = best_raw <= 0.0 || best_sig <= 0.2 * best_raw;
            return est;
        }
    }
    throw BallError("invalid-params", "unhandled space kind");
}

// ---------------------------------------------------------------------------

MembershipReport membership_report(const SpaceSpec& space, const HoloFn& f, std::int64_t budget,
                                   uint64_t seed) {
    MembershipReport rep;
    if (f.is_zero()) {
        rep.verdict = "in-by-theory";
        rep.reason = "zero function";
        return rep;
    }
    if (space.kind == SpaceSpec::Kind::N && f.is_polynomial()) {
        const SpaceParams& pr = space.params;
        if (pr.polynomial_ok) {
            rep.verdict = "in-by-theory";
            rep.reason = "polynomials belong when n*s + q > n";
        } else {
            rep.verdict = "out-by-theory";
            rep.reason = "no nonzero polynomial belongs when n*s + q <= n";
        }
        return rep;
    }
    if (space.kind == SpaceSpec::Kind::Nstar) {
        const SpaceParams& pr = space.params;
        if (!pr.green_ok) {
            rep.verdict = "out-by-theory";
            rep.reason = "space contains only the zero function for s >= n/(n-1)";
            return rep;
        }
        if (f.is_polynomial()) {
            rep.verdict = pr.polynomial_ok ? "in-by-theory" : "out-by-theory";
            rep.reason = "coincides with the unstarred space below the critical s";
            return rep;
        }
    }

    double hp = space.homogeneity_power();
    auto push_rung = [&](const std::string& label, const HoloFn& g, std::int64_t b) {
        NormEstimate est = norm(space, g, b, seed);
        LadderRung rung;
        rung.label = label;
        rung.value = est.value;
        rung.energy = std::pow(est.value, hp);
        rung.std_error = est.value > 0.0 && std::isfinite(est.value)
                             ? hp * std::pow(est.value, hp - 1.0) * est.std_error
                             : 0.0;
        rep.ladder.push_back(rung);
    };

    const LacunaryData* lac = f.as_lacunary();
    if (lac && lac->freqs.size() >= 2) {
        int blocks = int(lac->freqs.size());
        std::vector<int> ks;
        for (int k : {8, 12, 16}) {
            int kk = std::min(k, blocks);
            if (ks.empty() || ks.back() != kk) ks.push_back(kk);
        }
        if (ks.size() >= 2) {
            for (int k : ks) push_rung("K=" + std::to_string(k), f.truncated(k), budget);
        } else {
            for (int j = 0; j < 3; ++j)
                push_rung("budget=x" + std::to_string(1 << j), f, budget << j);
        }
    } else {
        for (int j = 0; j < 3; ++j)
            push_rung("budget=x" + std::to_string(1 << j), f, budget << j);
    }

    bool finite = true, reliable_vals = true;
    for (const auto& r : rep.ladder) {
        if (!std::isfinite(r.energy)) finite = false;
        if (r.energy < 0.0) reliable_vals = false;
    }
    if (!finite || !reliable_vals) {
        rep.verdict = "inconclusive";
        rep.reason = "ladder produced non-finite estimates";
        return rep;
    }

    bool growing = true, bounded = true;
    for (std::size_t j = 0; j + 1 < rep.ladder.size(); ++j) {
        const auto& lo = rep.ladder[j];
        const auto& hi = rep.ladder[j + 1];
        double ratio = lo.energy > 0.0 ? hi.energy / lo.energy : kInf;
        bool separated = hi.energy - 3.0 * hi.std_error > lo.energy + 3.0 * lo.std_error;
        if (!(ratio > 1.25 && separated)) growing = false;
        if (!(ratio >= 0.8 && ratio <= 1.25)) bounded = false;
    }
    if (rep.ladder.size() < 2) growing = bounded = false;
    if (growing) {
        rep.verdict = "numerically-growing";
        rep.reason = "estimates increase without a plateau across the ladder";
    } else if (bounded) {
        rep.verdict = "numerically-bounded";
        rep.reason = "estimates plateau across the ladder";
    } else {
        rep.verdict = "inconclusive";
        rep.reason = "ladder trend is neither clearly growing nor clearly flat";
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<ProfileRow> decay_profile(const SpaceSpec& space, const HoloFn& f,
                                      const std::vector<double>& radii, std::int64_t budget,
                                      uint64_t seed) {
    if (space.kind != SpaceSpec::Kind::N && space.kind != SpaceSpec::Kind::Nstar)
        throw BallError("invalid-params", "decay profile applies to the sup-type spaces");
    for (std::size_t j = 0; j + 1 < radii.size(); ++j)
        if (radii[j + 1] <= radii[j])
            throw BallError("invalid-params", "profile radii must increase");
    for (double r : radii)
        if (r < 0.0 || r >= 1.0) throw BallError("invalid-params", "profile radii must be in [0,1)");

    const SpaceParams& pr = space.params;
    std::vector<ProfileRow> rows;
    if (f.is_zero()) {
        for (double r : radii) rows.push_back({r, 0.0, 0.0});
        return rows;
    }
    FormSamples s = draw_form_samples(f, pr, space.form, budget, seed);
    GridOptions g0;
    auto dirs = grid_directions(pr.n, g0.resolved_dirs(pr.n));
    const Spline* hs = space.kind == SpaceSpec::Kind::Nstar ? &green_h_spline(pr.n) : nullptr;
    for (double r : radii) {
        ProfileRow row{r, 0.0, 0.0};
        bool first = true;
        for (const auto& d : dirs) {
            Point a = r * d;
            auto [v, sig] = hs ? green_weighted_mean(s, a, pr.s, pr.n, *hs)
                               : moebius_weighted_mean(s, a, pr.ns());
            if (first || v > row.value) {
                row.value = v;
                row.std_error = sig;
                first = false;
            }
            if (r == 0.0) break;  // all directions coincide at the origin
        }
        rows.push_back(row);
    }
    return rows;
}

KorenblumFit korenblum_profile(const SpaceParams& params, const HoloFn& f,
                               const std::vector<double>& radii, std::int64_t budget,
                               uint64_t seed) {
    KorenblumFit fit;
    fit.bound_exponent = -2.0 * (params.n + 1.0 - params.ns()) / params.p;
    SpaceSpec sp = SpaceSpec::N_space(params, NForm::I1);
    for (double r : radii) {
        if (r < 0.0 || r >= 1.0)
            throw BallError("invalid-params", "dilation radii must lie in [0,1)");
        HoloFn fr = r == 0.0 ? HoloFn::constant(f.dim(), f.at_zero()) : dilate(f, r);
        NormEstimate est = norm(sp, fr, budget, seed);
        bool ok = est.reliable && std::isfinite(est.value) && est.value > 0.0;
        fit.rows.push_back({r, est.value, ok});
    }
    // least squares of log||f_r|| against log(1-r^2)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (const auto& row : fit.rows) {
        if (!row.reliable) continue;
        double x = std::log1p(-row.r * row.r);
        double y = std::log(row.norm_value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m >= 3 && sxx - sx * sx / m > 1e-12) {
        fit.slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
        fit.intercept = (sy - fit.slope * sx) / m;
        fit.reliable = true;
    } else {
        fit.reliable = false;
    }
    return fit;
}

}  // namespace ballspace
