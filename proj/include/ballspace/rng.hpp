#pragma once

#include <cmath>
#include <cstdint>

namespace ballspace {

/* Counter-based RNG: sample i of a run seeded with s draws from a SplitMix64
 * stream whose state is a strong mix of (s, i).  Any sample can be generated
 * independently of the others, so parallel generation is trivially
 * deterministic. */
struct CounterRng {
    uint64_t state;

    CounterRng(uint64_t seed, uint64_t counter) {
        uint64_t x = seed * 0x9E3779B97F4A7C15ull + counter + 1;
        x = mix(x);
        state = mix(x ^ (counter * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull));
    }

    static uint64_t mix(uint64_t x) {
        x ^= x >> 33;
        x *= 0xFF51AFD7ED558CCDull;
        x ^= x >> 33;
        x *= 0xC4CEB9FE1A85EC53ull;
        x ^= x >> 33;
        return x;
    }

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double u01() { return double(next() >> 11) * 0x1.0p-53; }
    // uniform in (0,1]
    double u01_pos() { return double((next() >> 11) + 1) * 0x1.0p-53; }

    // standard normal pair (Box-Muller)
    void gauss2(double& g1, double& g2) {
        double u = u01_pos(), v = u01();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        g1 = r * std::cos(a);
        g2 = r * std::sin(a);
    }

    bool coin() { return (next() & 1ull) != 0; }
};

}  // namespace ballspace
