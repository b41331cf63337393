#pragma once

#include <cstdint>
#include <vector>

#include "ballspace/point.hpp"

namespace ballspace {

// Multi-index eta = (eta_1,...,eta_n), exact 64-bit arithmetic.
struct MultiIndex {
    std::vector<int64_t> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int64_t> exps) : e(std::move(exps)) {
        for (int64_t v : e)
            if (v < 0) throw BallError("invalid-params", "multi-index entries must be >= 0");
    }
    static MultiIndex zero(int n) { return MultiIndex(std::vector<int64_t>(n, 0)); }
    static MultiIndex axis(int n, int k, int64_t m = 1) {
        std::vector<int64_t> v(n, 0);
        v[k] = m;
        return MultiIndex(std::move(v));
    }

    int dim() const { return int(e.size()); }
    int64_t degree() const {
        int64_t d = 0;
        for (int64_t v : e) d += v;
        return d;
    }

    double log_factorial() const;    // log(eta!)
    uint64_t factorial_exact() const;  // throws on 64-bit overflow

    MultiIndex plus(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (int i = 0; i < dim(); ++i) r.e[i] += o.e[i];
        return r;
    }
    // eta - e_k; valid=false if the entry is already 0
    MultiIndex minus_axis(int k, bool& valid) const {
        MultiIndex r = *this;
        if (r.e[k] == 0) {
            valid = false;
            return r;
        }
        valid = true;
        r.e[k] -= 1;
        return r;
    }

    bool operator<(const MultiIndex& o) const { return e < o.e; }
    bool operator==(const MultiIndex& o) const { return e == o.e; }

    // z^eta (exponents arbitrary 64-bit, repeated squaring)
    cplx power(const Point& z) const;
};

cplx cpow_int(cplx base, int64_t n);

}  // namespace ballspace
