#pragma once

#include <cstdint>
#include <vector>

#include "ballspace/geometry.hpp"
#include "ballspace/holo_fn.hpp"
#include "ballspace/integrate.hpp"
#include "ballspace/spaces.hpp"

namespace ballspace {

/* A finite r-lattice in the Bergman metric, truncated to |z| <= radius_cap.
 * Centers are pairwise r/2-separated and every probe point of the capped
 * region lies within distance r of a center. */
struct Lattice {
    int n = 1;
    double r = 0.5;
    double radius_cap = 0.995;
    std::vector<Point> centers;

    // nearest center in the Bergman metric, ties to the lowest index
    std::size_t assign(const Point& z) const;
    double min_pairwise_separation() const;
};

Lattice generate_lattice(int n, double r, double radius_cap, uint64_t seed);

// max over probes of the Bergman distance to the nearest center
double covering_radius(const Lattice& lat, const std::vector<Point>& probes);

// deterministic probe set spread over the capped region
std::vector<Point> lattice_probes(int n, double radius_cap, std::size_t count, uint64_t seed);

// largest number of metric balls E(a_k, mult*r) containing a single probe
int max_overlap(const Lattice& lat, double radius_mult, const std::vector<Point>& probes);

/* T(f)(z) = int (1-|w|^2)^(b-n-1) |1-<z,w>|^(-b) f(w) dV(w); needs b > n. */
IntegralEstimate operator_T(const RealField& f, double b, const Point& z, std::int64_t budget,
                            uint64_t seed);

/* S(f)(z) = sum_k V_a(E_k) f(a_k) / (1-<z,a_k>)^b with a = b-(n+1); cell
 * masses estimated by one shared MC pass over the capped region. */
HoloFn operator_S(const std::function<cplx(const Point&)>& f, const Lattice& lat, double b,
                  std::int64_t budget, uint64_t seed);

// smallest admissible kernel exponent for atomic decomposition
double atomic_b_threshold(const SpaceParams& params);

HoloFn atomic_synthesize(const AtomicSumData& data);

/* Carleson test of the measure sum_k |c_k|^p (1-|a_k|^2)^(q+ns) delta_{a_k}
 * at exponent ns; exact tent sweep. */
NormEstimate atomic_carleson_check(const AtomicSumData& data, const SpaceParams& params,
                                   const GridOptions& grid = {});

}  // namespace ballspace
