#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ballspace/holo_fn.hpp"

namespace ballspace {

/* Block data of a Hadamard-gap series: per frequency n_k a sup norm M_k of
 * the block on the sphere and a p-mean L_k (both against normalized surface
 * measure, so M_k >= L_k always). */
struct GapSeries {
    int n = 1;
    std::vector<int64_t> freqs;
    std::vector<double> M;
    std::vector<double> L;
    double mean_exponent = 2.0;  // the p used when measuring L
    double gap_ratio = 2.0;      // min n_{k+1}/n_k
    bool monomial = false;       // every block a single monomial

    static GapSeries from_values(int n, std::vector<int64_t> freqs, std::vector<double> M,
                                 std::vector<double> L, double mean_exponent);
};

// Measure M_k and L_k for a lacunary function. Monomial blocks get exact
// values at any exponent; polynomial blocks get an exact L only at
// exponent 2 (sphere orthogonality), otherwise L is left at 0, which keeps
// it a valid lower bound.
GapSeries gap_series(const LacunaryData& lac, double mean_exponent);

enum class GapUse { M, L };

struct DyadicSum {
    std::vector<int64_t> k;     // dyadic indices with nonzero mass, ascending
    std::vector<double> t;      // t_k (may overflow to inf; see log_t)
    std::vector<double> log_t;
    std::string verdict;  // converges | diverges | inconclusive
    std::string reason;
    std::string note;  // regime flags
};

DyadicSum dyadic_block_sum(const GapSeries& series, const SpaceParams& params, GapUse use);

struct GapVerdict {
    std::string verdict;  // N: in | out | inconclusive; Hardy adds in-little
    std::string reason;
    bool exact = false;  // n=1 single-monomial blocks: the test is two-sided
    DyadicSum upper;     // M-side sum
    DyadicSum lower;     // L-side sum
};

GapVerdict gap_verdict_N(const GapSeries& series, const SpaceParams& params);

GapVerdict gap_verdict_hardy(const GapSeries& series, double alpha, double beta);

}  // namespace ballspace
