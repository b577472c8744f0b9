#pragma once

#include <cstdint>

namespace maxweight {

/// Counter-based generator in the splitmix64 family. A (seed, stream) pair
/// identifies an independent substream; replication k of an experiment draws
/// from stream base+k. No global state anywhere.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(seed),
          stream_(stream),
          state_(mix(mix(seed + 0x9e3779b97f4a7c15ull) + stream)) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform double in [0, 1) built from 53 random bits.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Same master seed, shifted stream id: independent replication streams.
    SeededRng substream(std::uint64_t offset) const noexcept {
        return SeededRng(seed_, stream_ + offset);
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_;
};

}  // namespace maxweight
