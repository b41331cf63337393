#include "ballspace/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ballspace/integrate.hpp"

namespace ballspace {

namespace {

constexpr int64_t kFreqCap = int64_t(1) << 40;
constexpr double kMargin = 1e-3;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_freqs(const std::vector<int64_t>& freqs) {
    for (std::size_t j = 0; j < freqs.size(); ++j) {
        if (freqs[j] < 1 || freqs[j] > kFreqCap)
            throw BallError("invalid-params", "frequencies must lie in [1, 2^40]");
        if (j > 0 && freqs[j] <= freqs[j - 1])
            throw BallError("invalid-params", "frequencies must increase strictly");
    }
}

double min_ratio(const std::vector<int64_t>& freqs) {
    if (freqs.size() < 2) return 2.0;
    double c = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < freqs.size(); ++j)
        c = std::min(c, double(freqs[j]) / double(freqs[j - 1]));
    if (c <= 1.0) throw BallError("invalid-params", "gap ratio must exceed 1");
    return c;
}

double logsumexp(const std::vector<double>& logs) {
    double m = kNegInf;
    for (double v : logs) m = std::max(m, v);
    if (m == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - m);
    return m + std::log(acc);
}

// Geometric trend of a positive sequence given as (index, log value) pairs.
// Ratios are per unit index so gaps in the index set do not distort them.
struct Trend {
    bool enough = false;
    bool all_below = true;  // every ratio < 1 - margin
    bool all_flat_or_down = true;  // every ratio < 1 + margin
    bool all_above = true;  // every ratio >= 1 + margin
    bool none_below_one = true;  // every ratio >= 1 - 1e-9
};

Trend ratio_trend(const std::vector<int64_t>& idx, const std::vector<double>& logv,
                  std::size_t window) {
    Trend tr;
    std::size_t n = idx.size();
    if (n < 2) return tr;
    std::size_t lo = n > window ? n - window : 0;
    for (std::size_t j = lo; j + 1 < n; ++j) {
        double rho = std::exp((logv[j + 1] - logv[j]) / double(idx[j + 1] - idx[j]));
        if (!(rho < 1.0 - kMargin)) tr.all_below = false;
        if (!(rho < 1.0 + kMargin)) tr.all_flat_or_down = false;
        if (!(rho >= 1.0 + kMargin)) tr.all_above = false;
        if (!(rho >= 1.0 - 1e-9)) tr.none_below_one = false;
    }
    tr.enough = true;
    return tr;
}

}  // namespace

GapSeries GapSeries::from_values(int n, std::vector<int64_t> freqs, std::vector<double> M,
                                 std::vector<double> L, double mean_exponent) {
    if (n < 1) throw BallError("invalid-params", "dimension must be >= 1");
    if (mean_exponent < 1.0) throw BallError("invalid-params", "mean exponent must be >= 1");
    validate_freqs(freqs);
    if (M.size() != freqs.size())
        throw BallError("invalid-params", "one sup norm per frequency required");
    if (!L.empty() && L.size() != freqs.size())
        throw BallError("invalid-params", "p-means must match the frequency count");
    for (std::size_t j = 0; j < freqs.size(); ++j) {
        if (!(M[j] >= 0.0)) throw BallError("invalid-params", "sup norms must be >= 0");
        if (!L.empty()) {
            if (!(L[j] >= 0.0)) throw BallError("invalid-params", "p-means must be >= 0");
            if (L[j] > M[j] * (1.0 + 1e-12) + 1e-300)
                throw BallError("invalid-params", "block mean exceeds block sup");
        }
    }
    GapSeries s;
    s.n = n;
    s.gap_ratio = min_ratio(freqs);
    s.freqs = std::move(freqs);
    s.M = std::move(M);
    s.L = L.empty() ? std::vector<double>(s.freqs.size(), 0.0) : std::move(L);
    s.mean_exponent = mean_exponent;
    return s;
}

GapSeries gap_series(const LacunaryData& lac, double mean_exponent) {
    if (mean_exponent < 1.0) throw BallError("invalid-params", "mean exponent must be >= 1");
    validate_freqs(lac.freqs);
    GapSeries s;
    s.n = lac.n;
    s.freqs = lac.freqs;
    s.gap_ratio = lac.gap_ratio;
    s.mean_exponent = mean_exponent;
    s.monomial = true;
    for (std::size_t k = 0; k < lac.blocks.size(); ++k) {
        const LacunaryBlock& b = lac.blocks[k];
        if (!b.poly) {
            double a = std::abs(b.coeff);
            std::vector<int64_t> eta(std::size_t(lac.n), 0);
            eta[std::size_t(b.axis)] = lac.freqs[k];
            s.M.push_back(a);
            s.L.push_back(a * sphere_moment(eta, mean_exponent, lac.n));
            continue;
        }
        s.monomial = false;
        s.M.push_back(b.sup_norm);
        if (mean_exponent == 2.0) {
            // monomials are orthogonal on the sphere, so the 2-mean is exact
            double acc = 0.0;
            for (const auto& [eta, c] : b.poly->c) {
                double w = sphere_moment(eta.e, 2.0, lac.n);
                acc += std::norm(c) * w * w;
            }
            s.L.push_back(std::sqrt(acc));
        } else {
            s.L.push_back(0.0);
        }
    }
    return s;
}

DyadicSum dyadic_block_sum(const GapSeries& series, const SpaceParams& params, GapUse use) {
    if (series.n != params.n)
        throw BallError("invalid-params", "series dimension does not match the space");
    const std::vector<double>& X = use == GapUse::M ? series.M : series.L;
    if (X.size() != series.freqs.size())
        throw BallError("invalid-params", "series is missing block values");

    double theta = params.ns() + params.q - params.n;
    double p = params.p;
    const double ln2 = std::log(2.0);

    std::map<int64_t, std::vector<double>> bins;  // dyadic index -> p-powers (logs)
    for (std::size_t j = 0; j < series.freqs.size(); ++j) {
        int64_t k = 0;
        for (int64_t f = series.freqs[j]; f > 1; f >>= 1) ++k;
        if (X[j] > 0.0) bins[k].push_back(p * std::log(X[j]));
        else bins[k];  // keep the bin so block counting sees it
    }

    DyadicSum out;
    if (params.s > 1.0) out.note = "s>1 lies outside the intended regime";
    std::size_t populated = bins.size();
    for (const auto& [k, logs] : bins) {
        double lt = logsumexp(logs);
        if (lt == kNegInf) continue;
        lt -= double(k) * theta * ln2;
        out.k.push_back(k);
        out.log_t.push_back(lt);
        out.t.push_back(std::exp(lt));
    }

    if (out.k.empty()) {
        out.verdict = "converges";
        out.reason = "zero total mass";
        return out;
    }
    if (populated < 5) {
        out.verdict = "inconclusive";
        out.reason = "insufficient-data";
        return out;
    }
    Trend tr = ratio_trend(out.k, out.log_t, 10);
    if (tr.enough && tr.all_below) {
        out.verdict = "converges";
        out.reason = "terms decay geometrically";
    } else if (tr.enough && tr.none_below_one) {
        out.verdict = "diverges";
        out.reason = "terms do not decay";
    } else {
        out.verdict = "inconclusive";
        out.reason = "no stable geometric trend over the last blocks";
    }
    return out;
}

GapVerdict gap_verdict_N(const GapSeries& series, const SpaceParams& params) {
    GapVerdict v;
    if (series.freqs.empty()) {
        v.verdict = "in";
        v.reason = "zero function";
        v.exact = true;
        return v;
    }
    v.upper = dyadic_block_sum(series, params, GapUse::M);
    v.lower = dyadic_block_sum(series, params, GapUse::L);
    v.exact = series.n == 1 && series.monomial;
    if (v.exact) {
        // single-monomial blocks on the disc: M_k = L_k, the test is two-sided
        if (v.upper.verdict == "converges") {
            v.verdict = "in";
            v.reason = "dyadic sum converges (exact criterion)";
        } else if (v.upper.verdict == "diverges") {
            v.verdict = "out";
            v.reason = "dyadic sum diverges (exact criterion)";
        } else {
            v.verdict = "inconclusive";
            v.reason = v.upper.reason;
        }
        return v;
    }
    if (v.upper.verdict == "converges") {
        v.verdict = "in";
        v.reason = "sup-block sum converges, which is sufficient";
    } else if (v.lower.verdict == "diverges") {
        v.verdict = "out";
        v.reason = "mean-block sum diverges, which is necessary";
    } else {
        v.verdict = "inconclusive";
        v.reason = "upper sum " + v.upper.verdict + ", lower sum " + v.lower.verdict;
    }
    return v;
}

GapVerdict gap_verdict_hardy(const GapSeries& series, double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw BallError("invalid-params", "weighted Hardy test needs alpha > 0, beta > 0");
    GapVerdict v;
    if (series.freqs.empty()) {
        v.verdict = "in-little";
        v.reason = "zero function";
        v.exact = true;
        return v;
    }
    if (series.L.size() != series.freqs.size())
        throw BallError("invalid-params", "series is missing block means");

    std::vector<int64_t> idx;
    std::vector<double> logu;
    for (std::size_t k = 0; k < series.freqs.size(); ++k) {
        if (series.L[k] <= 0.0) continue;
        idx.push_back(int64_t(k));
        logu.push_back(std::log(series.L[k]) - beta * std::log(double(series.freqs[k])));
    }
    if (idx.empty()) {
        v.verdict = "in-little";
        v.reason = "zero block means";
        return v;
    }
    if (idx.size() < 5) {
        v.verdict = "inconclusive";
        v.reason = "insufficient-data";
        return v;
    }
    Trend tr = ratio_trend(idx, logu, 10);
    if (tr.all_below) {
        v.verdict = "in-little";
        v.reason = "block means vanish against n_k^beta";
    } else if (tr.all_flat_or_down) {
        v.verdict = "in";
        v.reason = "block means stay bounded against n_k^beta";
    } else if (tr.all_above) {
        v.verdict = "out";
        v.reason = "block means grow against n_k^beta";
    } else {
        v.verdict = "inconclusive";
        v.reason = "no stable trend in the normalized block means";
    }
    return v;
}

}  // namespace ballspace
