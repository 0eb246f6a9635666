// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>

namespace wppan {

// SplitMix64 finalizer. Statistically solid for Monte Carlo use and trivially
// counter-addressable, which is what the reproducibility contract needs.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream domains. Each (trial, domain, index) triple owns an independent
/// substream, so changing the number of users or antennas never perturbs
/// draws belonging to other entities.
enum class Stream : std::uint32_t {
    UserPosition = 1,
    DeviceFading = 2,
    MisoFading = 3,
    Generic = 0xffff,
};

/// Counter-based random substream: the n-th variate is a pure function of
/// (seed, trial, domain, index, n). No ambient entropy, no shared state.
class Substream {
  public:
    Substream(std::uint64_t seed, std::uint64_t trial, Stream domain, std::uint32_t index)
        : key_(derive_key(seed, trial, static_cast<std::uint32_t>(domain), index)) {}

    std::uint64_t next_u64() { return mix64(key_ + counter_++ * 0x9e3779b97f4a7c15ULL); }

    /// Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes exactly two words per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]: keeps log() finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly-symmetric complex normal with unit expected power.
    std::complex<double> complex_normal() {
        const double s = 0.70710678118654752440;  // 1/sqrt(2)
        return {s * normal(), s * normal()};
    }

  private:
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t trial,
                                    std::uint32_t domain, std::uint32_t index) {
        std::uint64_t k = mix64(seed);
        k = mix64(k ^ trial);
        k = mix64(k ^ (static_cast<std::uint64_t>(domain) << 32 | index));
        return k;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wppan
