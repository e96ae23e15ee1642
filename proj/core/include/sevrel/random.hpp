#pragma once

#include <cstdint>
#include <random>

namespace sevrel {

// Deterministic uniform source for one simulation chunk. The sub-stream for
// (masterSeed, streamIndex) is fixed by the standard's specification of
// mt19937_64 and seed_seq, so sequences agree across platforms.
class RandomStream {
public:
    RandomStream(std::uint64_t masterSeed, std::uint64_t streamIndex);

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t next_u64() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Stream indices at or above this value are reserved for auxiliary draws
// (calibration samples, reservoir merging, bootstrap) so they never collide
// with chunk streams.
inline constexpr std::uint64_t kAuxiliaryStreamBase = std::uint64_t{1} << 62;

}  // namespace sevrel
