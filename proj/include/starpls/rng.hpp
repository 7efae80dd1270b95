#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace starpls {

// splitmix64 finalizer, used for stream derivation and engine seeding.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    return mix64(state);
}

// Addressable random stream. Identical (seed, stream_id) reproduce identical
// draw sequences no matter how work is scheduled across threads; substreams
// are derived by hashing so that e.g. every CEO candidate owns its own stream.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngStream substream(std::uint64_t a, std::uint64_t b = 0) const {
        std::uint64_t id = mix64(stream_id + 0x9e3779b97f4a7c15ULL);
        id = mix64(id ^ (a + 0xd1b54a32d192ed03ULL));
        id = mix64(id ^ (b + 0x8cb92ba72f3d8dd7ULL));
        return RngStream{seed, id};
    }
};

// xoshiro256** with splitmix64 seeding. Small state, cheap construction,
// fully specified output (no dependence on the standard library's
// distribution implementations).
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(const RngStream& s) {
        std::uint64_t sm = s.seed ^ mix64(s.stream_id ^ 0x2545f4914f6cdd1dULL);
        for (auto& w : state_) w = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open01() { return 1.0 - uniform01(); }

    // Standard normal via Box-Muller.
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform_open01()));
        const double theta = 2.0 * pi() * uniform01();
        return r * std::cos(theta);
    }

    // Circularly-symmetric complex Gaussian, mean 0, unit variance
    // (real/imag independent N(0, 1/2)).
    std::complex<double> complex_normal() {
        const double r = std::sqrt(-std::log(uniform_open01()));
        const double theta = 2.0 * pi() * uniform01();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

private:
    static constexpr double pi() { return 3.14159265358979323846; }
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

}  // namespace starpls
