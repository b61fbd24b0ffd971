#pragma once

#include <cstdint>
#include <random>

#include "sphereperc/geometry.hpp"

namespace sphereperc {

// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e9b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random stream. Doubles are produced directly from the raw
// 64-bit output so results are bitwise reproducible for a fixed seed,
// independent of platform library details and of how many workers run.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(mix64(seed)) {}

    // Substream for worker/trial `index`: results depend only on (seed, index).
    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(mix64(seed) ^ mix64(index * 0x2545f4914f6cdd1dULL + 1));
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

// Uniform point on the unit sphere: cos-colatitude uniform in [-1, 1),
// azimuth uniform in [0, 2*pi). Exactly two draws per point.
inline SpherePoint sample_uniform_sphere(RandomStream& stream) {
    const double z = -1.0 + 2.0 * stream.next_unit();
    const double phi = 2.0 * kPi * stream.next_unit();
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return SpherePoint(Vec3{s * std::cos(phi), s * std::sin(phi), z});
}

}  // namespace sphereperc
