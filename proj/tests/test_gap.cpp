#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ballspace/gap.hpp"
#include "ballspace/integrate.hpp"

using namespace ballspace;

namespace {

// sum_k 2^(k q / p) z^(2^k), the divergence witness for s <= 1
LacunaryData lacunary_witness_growth(int kmax, double q, double p) {
    LacunaryData lac;
    lac.n = 1;
    for (int k = 0; k < kmax; ++k) {
        lac.freqs.push_back(int64_t(1) << k);
        double a = std::exp2(k * q / p);
        lac.blocks.push_back({0, cplx(a), nullptr, a});
    }
    return lac;
}

// coefficients tuned to the critical line of s1: converges above, diverges at
LacunaryData lacunary_witness_critical(int kmax, double s1, double q, double p) {
    LacunaryData lac;
    lac.n = 1;
    for (int k = 0; k < kmax; ++k) {
        lac.freqs.push_back(int64_t(1) << k);
        double a = std::exp2(k * (s1 + q - 1.0) / p);
        lac.blocks.push_back({0, cplx(a), nullptr, a});
    }
    return lac;
}

}  // namespace

TEST_CASE("from_values validates its input") {
    CHECK_THROWS_AS(GapSeries::from_values(1, {0}, {1.0}, {}, 2.0), BallError);
    CHECK_THROWS_AS(GapSeries::from_values(1, {4, 2}, {1.0, 1.0}, {}, 2.0), BallError);
    CHECK_THROWS_AS(GapSeries::from_values(1, {2, 2}, {1.0, 1.0}, {}, 2.0), BallError);
    CHECK_THROWS_AS(GapSeries::from_values(1, {int64_t(1) << 41}, {1.0}, {}, 2.0), BallError);
    CHECK_THROWS_AS(GapSeries::from_values(1, {1, 2}, {1.0}, {}, 2.0), BallError);
    CHECK_THROWS_AS(GapSeries::from_values(1, {1, 2}, {1.0, 1.0}, {1.0}, 2.0), BallError);
    CHECK_THROWS_AS(GapSeries::from_values(1, {1}, {1.0}, {2.0}, 2.0), BallError);
    CHECK_THROWS_AS(GapSeries::from_values(1, {1}, {-1.0}, {}, 2.0), BallError);
    CHECK_THROWS_AS(GapSeries::from_values(0, {1}, {1.0}, {}, 2.0), BallError);

    GapSeries s = GapSeries::from_values(2, {2, 6, 24}, {1.0, 2.0, 3.0}, {0.5, 1.0, 1.5}, 2.0);
    CHECK(s.gap_ratio == doctest::Approx(3.0));
    CHECK(s.L[1] == 1.0);
    GapSeries s2 = GapSeries::from_values(1, {1, 3}, {1.0, 1.0}, {}, 2.0);
    CHECK(s2.L.size() == 2);
    CHECK(s2.L[0] == 0.0);
}

TEST_CASE("gap_series measures monomial blocks exactly") {
    LacunaryData lac = lacunary_witness_growth(6, 1.0, 2.0);
    GapSeries s = gap_series(lac, 2.0);
    CHECK(s.monomial);
    for (int k = 0; k < 6; ++k) {
        CHECK(s.M[k] == doctest::Approx(std::exp2(0.5 * k)).epsilon(1e-13));
        // on the circle every monomial has unit modulus, so L = M
        CHECK(s.L[k] == doctest::Approx(s.M[k]).epsilon(1e-13));
    }

    LacunaryData lac2;
    lac2.n = 2;
    lac2.freqs = {4};
    lac2.blocks.push_back({1, cplx(3.0), nullptr, 3.0});
    GapSeries s2 = gap_series(lac2, 2.0);
    double om = sphere_moment({0, 4}, 2.0, 2);
    CHECK(s2.L[0] == doctest::Approx(3.0 * om).epsilon(1e-12));
    CHECK(s2.M[0] == doctest::Approx(3.0));
}

TEST_CASE("gap_series handles polynomial blocks") {
    LacunaryData lac;
    lac.n = 2;
    lac.freqs = {3};
    auto poly = std::make_shared<PolyData>();
    poly->n = 2;
    poly->c[MultiIndex({3, 0})] = cplx(1.0);
    poly->c[MultiIndex({1, 2})] = cplx(2.0);
    lac.blocks.push_back({0, cplx(0.0), poly, 3.0});
    GapSeries s = gap_series(lac, 2.0);
    CHECK(!s.monomial);
    double w1 = sphere_moment({3, 0}, 2.0, 2);
    double w2 = sphere_moment({1, 2}, 2.0, 2);
    CHECK(s.L[0] == doctest::Approx(std::sqrt(w1 * w1 + 4.0 * w2 * w2)).epsilon(1e-12));
    CHECK(s.M[0] == 3.0);

    GapSeries s3 = gap_series(lac, 3.0);
    CHECK(s3.L[0] == 0.0);  // no closed form away from exponent 2
}

TEST_CASE("dyadic sums of the growth witness") {
    GapSeries s = gap_series(lacunary_witness_growth(21, 1.0, 2.0), 2.0);
    for (double sv : {0.5, 0.8, 1.0}) {
        SpaceParams params(1, 2.0, 1.0, sv);
        DyadicSum ds = dyadic_block_sum(s, params, GapUse::M);
        CHECK(ds.verdict == "diverges");
        CHECK(ds.note.empty());
    }
    // t_k = 2^(k (1-s)) at q=1, p=2
    SpaceParams half(1, 2.0, 1.0, 0.5);
    DyadicSum ds = dyadic_block_sum(s, half, GapUse::M);
    REQUIRE(ds.k.size() == 21);
    CHECK(ds.t[5] == doctest::Approx(std::exp2(2.5)).epsilon(1e-12));
    CHECK(ds.t[20] == doctest::Approx(std::exp2(10.0)).epsilon(1e-12));

    SpaceParams big(1, 2.0, 1.0, 1.5);
    DyadicSum conv = dyadic_block_sum(s, big, GapUse::M);
    CHECK(conv.verdict == "converges");
    CHECK(conv.note == "s>1 lies outside the intended regime");
}

TEST_CASE("dyadic sums of the critical witness") {
    GapSeries s = gap_series(lacunary_witness_critical(21, 0.6, 1.0, 2.0), 2.0);
    SpaceParams at(1, 2.0, 1.0, 0.6);
    CHECK(dyadic_block_sum(s, at, GapUse::M).verdict == "diverges");
    SpaceParams above(1, 2.0, 1.0, 0.9);
    CHECK(dyadic_block_sum(s, above, GapUse::M).verdict == "converges");
}

TEST_CASE("dyadic sum edge cases") {
    LacunaryData zero;
    zero.n = 1;
    for (int k = 0; k < 8; ++k) {
        zero.freqs.push_back(int64_t(1) << k);
        zero.blocks.push_back({0, cplx(0.0), nullptr, 0.0});
    }
    DyadicSum z = dyadic_block_sum(gap_series(zero, 2.0), SpaceParams(1, 2, 1, 0.5), GapUse::M);
    CHECK(z.verdict == "converges");
    CHECK(z.reason == "zero total mass");

    GapSeries tiny = gap_series(lacunary_witness_growth(3, 1.0, 2.0), 2.0);
    DyadicSum t = dyadic_block_sum(tiny, SpaceParams(1, 2, 1, 0.5), GapUse::M);
    CHECK(t.verdict == "inconclusive");
    CHECK(t.reason == "insufficient-data");

    CHECK_THROWS_AS(dyadic_block_sum(tiny, SpaceParams(2, 2, 1, 0.5), GapUse::M), BallError);
}

TEST_CASE("sparse frequencies keep per-index ratios honest") {
    std::vector<int64_t> freqs;
    std::vector<double> M;
    for (int j = 0; j < 10; ++j) {
        freqs.push_back(int64_t(1) << (2 * j));
        M.push_back(std::exp2(-2.0 * j));
    }
    GapSeries s = GapSeries::from_values(2, freqs, M, {}, 2.0);
    SpaceParams params(2, 2.0, 1.0, 0.5);  // theta = 0
    DyadicSum ds = dyadic_block_sum(s, params, GapUse::M);
    CHECK(ds.verdict == "converges");
}

TEST_CASE("verdicts for the unstarred space") {
    SpaceParams half(1, 2.0, 1.0, 0.5);
    GapSeries f1 = gap_series(lacunary_witness_growth(21, 1.0, 2.0), 2.0);
    GapVerdict out = gap_verdict_N(f1, half);
    CHECK(out.verdict == "out");
    CHECK(out.exact);
    CHECK(out.reason == "dyadic sum diverges (exact criterion)");

    SpaceParams big(1, 2.0, 1.0, 1.5);
    GapVerdict in = gap_verdict_N(f1, big);
    CHECK(in.verdict == "in");
    CHECK(in.exact);

    GapVerdict empty = gap_verdict_N(GapSeries{}, half);
    CHECK(empty.verdict == "in");
    CHECK(empty.exact);
    CHECK(empty.reason == "zero function");
}

TEST_CASE("verdicts with one-sided information") {
    std::vector<int64_t> freqs;
    for (int k = 0; k < 12; ++k) freqs.push_back(int64_t(1) << k);
    SpaceParams params(2, 2.0, 1.0, 0.5);  // theta = 0

    std::vector<double> fast(12), flat(12, 1.0), none(12, 0.0);
    for (int k = 0; k < 12; ++k) fast[k] = std::exp2(-2.0 * k);

    GapVerdict in = gap_verdict_N(GapSeries::from_values(2, freqs, fast, {}, 2.0), params);
    CHECK(in.verdict == "in");
    CHECK(!in.exact);
    CHECK(in.reason == "sup-block sum converges, which is sufficient");

    GapVerdict out = gap_verdict_N(GapSeries::from_values(2, freqs, flat, flat, 2.0), params);
    CHECK(out.verdict == "out");
    CHECK(out.reason == "mean-block sum diverges, which is necessary");

    GapVerdict unk = gap_verdict_N(GapSeries::from_values(2, freqs, flat, fast, 2.0), params);
    CHECK(unk.verdict == "inconclusive");
    CHECK(unk.reason == "upper sum diverges, lower sum converges");

    GapVerdict byM = gap_verdict_N(GapSeries::from_values(2, freqs, flat, none, 2.0), params);
    CHECK(byM.verdict == "inconclusive");
}

TEST_CASE("weighted hardy verdicts") {
    std::vector<int64_t> freqs;
    for (int k = 0; k < 15; ++k) freqs.push_back(int64_t(1) << k);
    double beta = 0.75;

    auto build = [&](double shift, double kmul) {
        std::vector<double> M(15), L(15);
        for (int k = 0; k < 15; ++k) {
            L[k] = std::pow(double(freqs[k]), beta + shift) * (kmul == 0.0 ? 1.0 : std::pow(double(k + 1), kmul));
            M[k] = 2.0 * L[k];
        }
        return GapSeries::from_values(1, freqs, M, L, 2.0);
    };

    CHECK(gap_verdict_hardy(build(0.0, 0.0), 1.0, beta).verdict == "in");
    CHECK(gap_verdict_hardy(build(0.0, -1.0), 1.0, beta).verdict == "in-little");
    CHECK(gap_verdict_hardy(build(-0.1, 0.0), 1.0, beta).verdict == "in-little");
    CHECK(gap_verdict_hardy(build(0.0, 1.0), 1.0, beta).verdict == "out");
    CHECK(gap_verdict_hardy(build(0.1, 0.0), 1.0, beta).verdict == "out");

    GapVerdict empty = gap_verdict_hardy(GapSeries{}, 1.0, beta);
    CHECK(empty.verdict == "in-little");

    std::vector<double> zl(15, 0.0), zm(15, 1.0);
    GapVerdict zeros = gap_verdict_hardy(GapSeries::from_values(1, freqs, zm, zl, 2.0), 1.0, beta);
    CHECK(zeros.verdict == "in-little");
    CHECK(zeros.reason == "zero block means");

    std::vector<int64_t> few = {1, 2, 4};
    std::vector<double> fm(3, 1.0);
    GapVerdict small = gap_verdict_hardy(GapSeries::from_values(1, few, fm, fm, 2.0), 1.0, beta);
    CHECK(small.verdict == "inconclusive");

    CHECK_THROWS_AS(gap_verdict_hardy(build(0.0, 0.0), 0.0, beta), BallError);
    CHECK_THROWS_AS(gap_verdict_hardy(build(0.0, 0.0), 1.0, -1.0), BallError);
}
