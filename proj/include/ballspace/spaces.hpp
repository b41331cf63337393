#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ballspace/geometry.hpp"
#include "ballspace/holo_fn.hpp"
#include "ballspace/integrate.hpp"

namespace ballspace {

enum class NForm { I1, I2, I3, I4, I5 };

struct SpaceSpec {
    enum class Kind { N, Nstar, BergmanType, Bergman, Bloch, WeightedHardy, Tent };
    Kind kind = Kind::N;
    int n = 1;
    SpaceParams params;   // N / Nstar
    NForm form = NForm::I1;
    double l = 1.0;       // A^{-l} exponent; also the tent-space l
    double p = 2.0;       // Bergman p
    double alpha = 0.0;   // Bergman / Bloch / weighted-Hardy alpha
    double beta = 1.0;    // weighted-Hardy beta
    double m = 2.0;       // tent-space m

    static SpaceSpec N_space(const SpaceParams& params, NForm form = NForm::I1);
    static SpaceSpec Nstar_space(const SpaceParams& params);
    static SpaceSpec bergman_type(int n, double l);
    static SpaceSpec bergman(int n, double p, double alpha);
    static SpaceSpec bloch(int n, double alpha);
    static SpaceSpec weighted_hardy(int n, double alpha, double beta);
    static SpaceSpec tent_space(int n, double m, double l);

    std::string name() const;
    // exponent making the norm h-homogeneous: norm(c f) = |c| norm(f)
    double homogeneity_power() const;
};

struct GridOptions {
    int dirs = 0;               // 0 -> 16 for n=1, 64 otherwise
    std::vector<double> radii;  // empty -> {0, .3, .6, .8, .9, .95, .99}
    bool refine = true;

    int resolved_dirs(int n) const;
    std::vector<double> resolved_radii() const;
};

// One sup-grid candidate with the raw (pre-root) integral estimate; exposed
// so property tests can compare integrands pointwise under shared samples.
struct GridValue {
    Point a;
    double raw = 0.0;
    double std_error = 0.0;
};

struct NormEstimate {
    double value = 0.0;
    double std_error = 0.0;
    Point argmax;
    double argmax_delta = 0.0;  // tent sups only
    std::size_t grid_size = 0;
    bool reliable = true;
    std::string status;  // "", "divergent-by-theory", "argmax-at-rim", ...
    std::vector<GridValue> detail;
};

struct CarlesonMeasure {
    int n = 1;
    std::vector<std::pair<Point, double>> atoms;
    std::function<double(const Point&)> density;  // against dlambda
    double tail_exp = 0.0;  // known (1-|z|^2) power inside the density, a sampling hint

    bool is_density() const { return bool(density); }
    double total_atom_mass() const;

    static CarlesonMeasure from_atoms(int n, std::vector<std::pair<Point, double>> atoms);
    static CarlesonMeasure from_density(int n, std::function<double(const Point&)> density,
                                        double tail_exp = 0.0);
};

enum class CarlesonMode { TentSup, MoebiusSup };

NormEstimate norm(const SpaceSpec& space, const HoloFn& f, std::int64_t budget, uint64_t seed,
                  const GridOptions& grid = {});

NormEstimate carleson_norm(const CarlesonMeasure& mu, double exponent, CarlesonMode mode,
                           const GridOptions& grid = {}, std::int64_t budget = 20000,
                           uint64_t seed = 12345);

struct LadderRung {
    std::string label;
    double value = 0.0;
    double energy = 0.0;  // value^p for p-homogeneous spaces
    double std_error = 0.0;  // of energy
};

struct MembershipReport {
    std::string verdict;  // in-by-theory | out-by-theory | numerically-bounded |
                          // numerically-growing | inconclusive
    std::string reason;
    std::vector<LadderRung> ladder;
};

MembershipReport membership_report(const SpaceSpec& space, const HoloFn& f,
                                   std::int64_t budget = 20000, uint64_t seed = 12345);

struct ProfileRow {
    double radius = 0.0;
    double value = 0.0;      // max over directions of the per-a raw integral
    double std_error = 0.0;
};

std::vector<ProfileRow> decay_profile(const SpaceSpec& space, const HoloFn& f,
                                      const std::vector<double>& radii,
                                      std::int64_t budget = 20000, uint64_t seed = 12345);

struct KorenblumRow {
    double r = 0.0;
    double norm_value = 0.0;
    bool reliable = true;
};

struct KorenblumFit {
    std::vector<KorenblumRow> rows;
    double slope = 0.0;  // fitted d log||f_r|| / d log(1-r^2)
    double intercept = 0.0;
    double bound_exponent = 0.0;  // -2(n+1-ns)/p
    bool reliable = true;
};

KorenblumFit korenblum_profile(const SpaceParams& params, const HoloFn& f,
                               const std::vector<double>& radii, std::int64_t budget = 20000,
                               uint64_t seed = 12345);

// Fixed low-discrepancy direction set (independent of the user seed so that
// frozen calibration constants stay meaningful).
std::vector<Point> grid_directions(int n, int dirs);
// dirs x radii with the origin deduplicated
std::vector<Point> sup_grid(int n, const GridOptions& grid);
// logarithmic delta ladder {2, 1, ..., 2^-10} for tent sups
std::vector<double> carleson_delta_grid();

/* Shared samples of one Carleson tube Q_delta(xi): mean_i w_i h(z_i)
 * estimates int_{Q_delta} h dlambda.  tail_exp is the known (1-|z|^2) power
 * of the intended h, used to bias the cross-slice radius. */
struct TubeStratum {
    Point xi;
    double delta = 0.0;
    std::vector<Point> z;
    std::vector<double> w;  // 0 for proposals that fell outside the ball
};
TubeStratum tube_stratum(const Point& xi, double delta, int n, std::int64_t count,
                         uint64_t seed, double tail_exp);

}  // namespace ballspace
