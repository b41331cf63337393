#include "ballspace/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ballspace/parallel.hpp"
#include "ballspace/rng.hpp"

namespace ballspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_bias(double g) { return std::min(0.0, std::max(-0.95, g)); }

struct Kit {
    bool tent = false;       // tent-count style (d2/d4) vs sup-of-integrals
    bool rad_level = false;  // level function built from Rf
    double hom = 0.0;        // estimator homogeneity in f
};

Kit kit_for(DistanceKind which, double p) {
    switch (which) {
        case DistanceKind::D2: return {true, false, 0.0};
        case DistanceKind::D3: return {false, false, p};
        case DistanceKind::D4: return {true, true, 0.0};
        case DistanceKind::D5: return {false, true, p};
        case DistanceKind::D6: return {false, true, p};
        case DistanceKind::D7: return {false, true, p};
    }
    throw BallError("invalid-params", "unknown distance quantity");
}

/* Shared-strata estimator: samples are drawn once and sorted by the level
 * value, so every eps cut is a prefix and the estimate is exactly
 * nonincreasing in eps. */
class Evaluator {
  public:
    Evaluator(const HoloFn& f, const SpaceParams& pr, DistanceKind which, std::int64_t budget,
              uint64_t seed, const GridOptions& grid)
        : pr_(pr), which_(which), kit_(kit_for(which, pr.p)) {
        int n = pr.n;
        GridOptions g = grid;
        g.refine = false;  // a fixed grid keeps the eps sweep monotone
        HoloFn rf = kit_.rad_level ? radial_derivative(f) : HoloFn();

        if (kit_.tent) {
            auto dirs = grid_directions(n, g.resolved_dirs(n));
            auto deltas = carleson_delta_grid();
            double wsum = 0.0;
            for (double d : deltas) wsum += 1.0 / std::sqrt(d);
            for (std::size_t di = 0; di < dirs.size(); ++di)
                for (std::size_t dj = 0; dj < deltas.size(); ++dj) {
                    double delta = deltas[dj];
                    std::int64_t cnt = std::max<std::int64_t>(
                        64, std::int64_t(double(budget) / (std::sqrt(delta) * wsum)));
                    uint64_t cs = CounterRng::mix(
                        seed ^ (0x7E47A11ull + di * 0x100000001B3ull + dj));
                    TubeStratum st = tube_stratum(dirs[di], delta, n, cnt, cs, pr.ns());
                    Cell cell;
                    cell.delta = delta;
                    cell.count = cnt;
                    for (std::int64_t i = 0; i < cnt; ++i) {
                        if (st.w[i] == 0.0) continue;
                        double om = 1.0 - st.z[i].norm_sq();
                        double lev = kit_.rad_level
                                         ? std::abs(rf.eval(st.z[i])) *
                                               std::pow(om, pr.q / pr.p + 1.0)
                                         : std::abs(f.eval(st.z[i])) * std::pow(om, pr.q / pr.p);
                        cell.m.push_back(lev);
                        cell.h.push_back(st.w[i] * std::pow(om, pr.ns()));
                    }
                    sort_desc(cell.m, cell.h);
                    cells_.push_back(std::move(cell));
                }
            return;
        }

        double gamma = clamp_bias(pr.q - n - 1.0);
        double log_norm = radial_bias_log_norm(n, gamma);
        count_ = budget;
        z_.resize(budget);
        m_.resize(budget);
        D_.resize(budget);
        om_.resize(budget);
        parallel_for(budget, [&](std::int64_t i) {
            WeightedSample ws = ball_sample(n, seed, uint64_t(i), gamma, log_norm);
            double om = 1.0 - ws.z.norm_sq();
            double lev = 0.0, core = 0.0, wexp = 0.0;
            if (which_ == DistanceKind::D3) {
                double av = std::abs(f.eval(ws.z));
                lev = av * std::pow(om, pr.q / pr.p);
                core = std::pow(av, pr.p);
                wexp = pr.q - (n + 1.0);
            } else {
                auto gr = gradient(f, ws.z);
                cplx rfv(0.0);
                for (int k = 0; k < n; ++k) rfv += gr[k] * ws.z.z[k];
                lev = std::abs(rfv) * std::pow(om, pr.q / pr.p + 1.0);
                if (which_ == DistanceKind::D5) {
                    core = std::pow(std::abs(rfv), pr.p);
                    wexp = pr.p + pr.q - (n + 1.0);
                } else if (which_ == DistanceKind::D6) {
                    double gn = 0.0;
                    for (const auto& v : gr) gn += std::norm(v);
                    core = std::pow(std::sqrt(gn), pr.p);
                    wexp = pr.p + pr.q - (n + 1.0);
                } else {
                    core = std::pow(invariant_gradient_norm(f, ws.z), pr.p);
                    wexp = pr.q - (n + 1.0);
                }
            }
            z_[i] = ws.z;
            om_[i] = om;
            m_[i] = lev;
            D_[i] = ws.weight * core * std::pow(om, wexp);
        });
        std::vector<std::size_t> ord(z_.size());
        std::iota(ord.begin(), ord.end(), 0);
        std::stable_sort(ord.begin(), ord.end(),
                         [&](std::size_t a, std::size_t b) { return m_[a] > m_[b]; });
        permute(ord);
        grid_pts_ = sup_grid(n, g);
    }

    // estimates aligned with eps (ascending); exact prefix sums per cut
    std::vector<double> evaluate(const std::vector<double>& eps) const {
        std::size_t T = eps.size();
        std::vector<double> out(T, 0.0);
        if (kit_.tent) {
            for (const auto& cell : cells_) {
                std::vector<double> snaps = prefix_snaps(cell.m, cell.h, eps);
                for (std::size_t t = 0; t < T; ++t) {
                    double ratio =
                        snaps[t] / double(cell.count) / std::pow(cell.delta, pr_.ns());
                    out[t] = std::max(out[t], ratio);
                }
            }
            return out;
        }
        std::vector<std::vector<double>> rows(grid_pts_.size());
        parallel_for(std::int64_t(grid_pts_.size()), [&](std::int64_t gi) {
            const Point& a = grid_pts_[std::size_t(gi)];
            double oma = 1.0 - a.norm_sq();
            std::vector<double> terms(m_.size());
            for (std::int64_t i = 0; i < count_; ++i) {
                cplx d = cplx(1.0) - inner(z_[i], a);
                double t = oma * om_[i] / std::norm(d);
                terms[std::size_t(i)] = D_[i] * std::exp(pr_.ns() * std::log(t));
            }
            rows[std::size_t(gi)] = prefix_snaps(m_, terms, eps);
        });
        for (const auto& row : rows)
            for (std::size_t t = 0; t < T; ++t)
                out[t] = std::max(out[t], row[t] / double(count_));
        return out;
    }

  private:
    struct Cell {
        double delta = 0.0;
        std::int64_t count = 0;
        std::vector<double> m, h;  // sorted by m descending
    };

    static void sort_desc(std::vector<double>& m, std::vector<double>& h) {
        std::vector<std::size_t> ord(m.size());
        std::iota(ord.begin(), ord.end(), 0);
        std::stable_sort(ord.begin(), ord.end(),
                         [&](std::size_t a, std::size_t b) { return m[a] > m[b]; });
        std::vector<double> m2(m.size()), h2(m.size());
        for (std::size_t j = 0; j < ord.size(); ++j) {
            m2[j] = m[ord[j]];
            h2[j] = h[ord[j]];
        }
        m.swap(m2);
        h.swap(h2);
    }

    void permute(const std::vector<std::size_t>& ord) {
        std::vector<Point> z2(ord.size());
        std::vector<double> m2(ord.size()), D2(ord.size()), om2(ord.size());
        for (std::size_t j = 0; j < ord.size(); ++j) {
            z2[j] = z_[ord[j]];
            m2[j] = m_[ord[j]];
            D2[j] = D_[ord[j]];
            om2[j] = om_[ord[j]];
        }
        z_.swap(z2);
        m_.swap(m2);
        D_.swap(D2);
        om_.swap(om2);
    }

    // values sorted by m descending: prefix sums of v at each eps cut
    static std::vector<double> prefix_snaps(const std::vector<double>& m,
                                            const std::vector<double>& v,
                                            const std::vector<double>& eps) {
        std::vector<double> snaps(eps.size(), 0.0);
        double acc = 0.0;
        std::size_t j = 0;
        for (std::size_t t = eps.size(); t-- > 0;) {  // largest eps first
            while (j < m.size() && m[j] >= eps[t]) acc += v[j++];
            snaps[t] = acc;
        }
        return snaps;
    }

    SpaceParams pr_;
    DistanceKind which_;
    Kit kit_;
    std::vector<Cell> cells_;
    std::int64_t count_ = 0;
    std::vector<Point> z_;
    std::vector<double> m_, D_, om_;
    std::vector<Point> grid_pts_;
};

void enumerate_eta(int n, int degree_left, std::vector<int64_t>& cur,
                   std::vector<std::vector<int64_t>>& out) {
    if (int(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= degree_left; ++e) {
        cur.push_back(e);
        enumerate_eta(n, degree_left - e, cur, out);
        cur.pop_back();
    }
}

HoloFn calibration_poly(int n, int j) {
    std::vector<std::vector<int64_t>> etas;
    std::vector<int64_t> cur;
    enumerate_eta(n, 4, cur, etas);
    PolyCoeffs coeffs;
    CounterRng rng(0xCA11B5EEDull + uint64_t(j) * 0x9E3779B9ull, 0);
    for (const auto& e : etas) {
        int64_t deg = 0;
        for (int64_t v : e) deg += v;
        double scale = std::ldexp(1.0, -int(deg));
        cplx c(scale * (2.0 * rng.u01() - 1.0), scale * (2.0 * rng.u01() - 1.0));
        coeffs[MultiIndex(e)] = c;
    }
    return HoloFn::polynomial(n, std::move(coeffs));
}

/* Pass/fail cap: 4x the top of the estimator values over a small family of
 * polynomials (all inside the space), each normalized by its weighted sup
 * norm and probed at the fixed relative level 0.05. */
double calibrated_cap(DistanceKind which, const SpaceParams& pr, std::int64_t budget,
                      uint64_t seed, const GridOptions& grid) {
    static std::map<std::string, double> cache;
    static std::mutex mu;
    std::ostringstream key;
    key << int(which) << '|' << pr.n << '|' << pr.p << '|' << pr.q << '|' << pr.s << '|'
        << budget << '|' << grid.resolved_dirs(pr.n);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key.str());
        if (it != cache.end()) return it->second;
    }
    Kit kit = kit_for(which, pr.p);
    double lexp = pr.q / pr.p + (kit.rad_level ? 1.0 : 0.0);
    std::vector<double> vals;
    for (int j = 0; j < 16; ++j) {
        HoloFn g = calibration_poly(pr.n, j);
        HoloFn base = kit.rad_level ? radial_derivative(g) : g;
        double nf = norm(SpaceSpec::bergman_type(pr.n, lexp), base, budget, seed, grid).value;
        if (!(nf > 0.0) || !std::isfinite(nf)) continue;
        Evaluator ev(g, pr, which, budget, seed, grid);
        double est = ev.evaluate({0.05 * nf}).front();
        vals.push_back(est / std::pow(nf, kit.hom));
    }
    if (vals.empty()) throw BallError("calibration-failed", "no usable calibration runs");
    std::sort(vals.begin(), vals.end());
    std::size_t idx = std::size_t(std::ceil(0.99 * double(vals.size()))) - 1;
    double cap = 4.0 * vals[std::min(idx, vals.size() - 1)];
    std::lock_guard<std::mutex> lock(mu);
    cache[key.str()] = cap;
    return cap;
}

}  // namespace

DistanceKind parse_distance_kind(const std::string& name) {
    if (name == "d2") return DistanceKind::D2;
    if (name == "d3") return DistanceKind::D3;
    if (name == "d4") return DistanceKind::D4;
    if (name == "d5") return DistanceKind::D5;
    if (name == "d6") return DistanceKind::D6;
    if (name == "d7") return DistanceKind::D7;
    throw BallError("invalid-params", "unknown distance quantity " + name);
}

std::string distance_kind_name(DistanceKind which) {
    switch (which) {
        case DistanceKind::D2: return "d2";
        case DistanceKind::D3: return "d3";
        case DistanceKind::D4: return "d4";
        case DistanceKind::D5: return "d5";
        case DistanceKind::D6: return "d6";
        case DistanceKind::D7: return "d7";
    }
    return "?";
}

NormEstimate level_set_carleson(const LevelSetSpec& spec, std::int64_t budget, uint64_t seed,
                                const GridOptions& grid) {
    if (!(spec.eps > 0.0)) throw BallError("invalid-params", "level must be positive");
    if (spec.f.dim() != spec.params.n)
        throw BallError("invalid-params", "function dimension does not match the space");
    const SpaceParams& pr = spec.params;
    HoloFn base =
        spec.kind == LevelSetSpec::Kind::RadialDerivative ? radial_derivative(spec.f) : spec.f;
    double wexp = pr.q / pr.p + (spec.kind == LevelSetSpec::Kind::RadialDerivative ? 1.0 : 0.0);
    double eps = spec.eps;
    double ns = pr.ns();
    auto density = [base, wexp, eps, ns](const Point& z) {
        double om = 1.0 - z.norm_sq();
        double lev = std::abs(base.eval(z)) * std::pow(om, wexp);
        return lev >= eps ? std::pow(om, ns) : 0.0;
    };
    CarlesonMeasure mu = CarlesonMeasure::from_density(pr.n, density, ns);
    return carleson_norm(mu, ns, CarlesonMode::TentSup, grid, budget, seed);
}

DistanceResult distance_estimate(const HoloFn& f, const SpaceParams& params, DistanceKind which,
                                 std::vector<double> eps_grid, std::int64_t budget, uint64_t seed,
                                 const GridOptions& grid) {
    if (f.dim() != params.n)
        throw BallError("invalid-params", "function dimension does not match the space");
    Kit kit = kit_for(which, params.p);

    DistanceResult res;
    HoloFn base = kit.rad_level ? radial_derivative(f) : f;
    double lexp = params.q / params.p + (kit.rad_level ? 1.0 : 0.0);
    double nf = norm(SpaceSpec::bergman_type(params.n, lexp), base, budget, seed, grid).value;
    res.trace.level_norm = nf;
    if (f.is_zero() || !(nf > 0.0)) return res;  // distance 0, empty trace

    std::vector<double> eps = std::move(eps_grid);
    if (eps.empty()) {
        const int kPts = 25;
        double llo = std::log(1e-4), lhi = std::log(2.0);
        for (int t = 0; t < kPts; ++t)
            eps.push_back(nf * std::exp(llo + (lhi - llo) * t / double(kPts - 1)));
    }
    std::sort(eps.begin(), eps.end());
    for (double e : eps)
        if (!(e > 0.0)) throw BallError("invalid-params", "levels must be positive");

    Evaluator ev(f, params, which, budget, seed, grid);
    std::vector<double> est = ev.evaluate(eps);
    double cap = calibrated_cap(which, params, budget, seed, grid) * std::pow(nf, kit.hom);
    res.trace.cap = cap;

    std::size_t first_pass = eps.size();
    for (std::size_t t = 0; t < eps.size(); ++t)
        if (est[t] <= cap) {
            first_pass = t;
            break;
        }

    if (first_pass == eps.size()) {
        res.trace.bracketed = false;
        res.trace.lo = eps.back();
        res.trace.hi = kInf;
        res.value = eps.back();
    } else if (first_pass == 0) {
        res.trace.lo = 0.0;
        res.trace.hi = eps.front();
        res.value = eps.front();
    } else {
        double mid = std::exp(0.5 * (std::log(eps[first_pass - 1]) + std::log(eps[first_pass])));
        double em = ev.evaluate({mid}).front();
        if (em <= cap) {
            res.value = mid;
            res.trace.lo = eps[first_pass - 1];
            res.trace.hi = mid;
        } else {
            res.value = eps[first_pass];
            res.trace.lo = mid;
            res.trace.hi = eps[first_pass];
        }
        eps.insert(eps.begin() + std::ptrdiff_t(first_pass), mid);
        est.insert(est.begin() + std::ptrdiff_t(first_pass), em);
    }
    res.trace.eps = std::move(eps);
    res.trace.estimate = std::move(est);
    return res;
}

}  // namespace ballspace
