// Deterministic random numbers for experiments and tests.
//
// SplitMix64 keeps every randomized artifact reproducible from a single
// 64-bit seed across platforms (no reliance on std::mt19937 streams or
// libstdc++ distribution internals, whose outputs are not pinned by the
// standard).
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace weylseam {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with full 53-bit mantissa resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via Box–Muller (the log argument is kept away from 0).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double two_pi = 6.28318530717958647692;
        const double u1 = std::max(uniform01(), 0x1.0p-60);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    // Uniform on the disk of the given radius (area measure).
    std::complex<double> complex_disk(double radius) {
        const double two_pi = 6.28318530717958647692;
        const double r = radius * std::sqrt(uniform01());
        const double phi = two_pi * uniform01();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    std::complex<double> unit_complex() {
        const double two_pi = 6.28318530717958647692;
        const double phi = two_pi * uniform01();
        return {std::cos(phi), std::sin(phi)};
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace weylseam
