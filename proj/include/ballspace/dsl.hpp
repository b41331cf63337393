#pragma once

#include <json.hpp>

#include "ballspace/distance.hpp"
#include "ballspace/gap.hpp"
#include "ballspace/holo_fn.hpp"
#include "ballspace/lattice.hpp"
#include "ballspace/spaces.hpp"

namespace ballspace {

using json = nlohmann::json;

/* JSON forms (all errors carry the offending field path):
 *   point     [0.5, 0.3] real coords, one per dimension, or [[re,im], ...]
 *   function  {"poly": [[[e1,...,en], re, im], ...], "n": n}
 *             {"lacunary": {"freqs": "2^k" | [ints], "coeffs": "2^(k*t)" | [...],
 *                           "t": t, "kmax": K, "axis": 0, "n": 1}}
 *             {"kernel": {"type": "K"|"J"|"L"|"atom", "w": point, ...params}}
 *             {"atomic": {"b": b, "atoms": [[c_re, c_im, point], ...]}}
 *             {"dilate": {"r": r, "of": function}}
 *   space     {"space": "N", "n":, "p":, "q":, "s":, "form": "I1"} and the
 *             analogous {"space": "Nstar"|"BergmanType"|"Bergman"|"Bloch"|
 *                        "WeightedHardy"|"Tent", ...}
 *   measure   {"n": n, "atoms": [[point, weight], ...]}
 *   lattice   {"n": n, "r": r, "radius_cap": c, "centers": [point, ...]}
 */

Point parse_point(const json& j, const std::string& ctx);
HoloFn parse_function(const json& j);
SpaceSpec parse_space(const json& j);
SpaceParams parse_space_params(const json& j);  // requires an N/Nstar space
CarlesonMeasure parse_measure(const json& j);
AtomicSumData parse_atomic_data(const json& j);
Lattice parse_lattice(const json& j);

json point_to_json(const Point& z);
json lattice_to_json(const Lattice& lat);

}  // namespace ballspace
