#include "sevrel/random.hpp"

namespace sevrel {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t masterSeed, std::uint64_t streamIndex) {
    std::seed_seq seq{static_cast<std::uint32_t>(masterSeed),
                      static_cast<std::uint32_t>(masterSeed >> 32),
                      static_cast<std::uint32_t>(streamIndex),
                      static_cast<std::uint32_t>(streamIndex >> 32),
                      0x5e7e1u};
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t masterSeed, std::uint64_t streamIndex)
    : engine_(seeded_engine(masterSeed, streamIndex)) {}

}  // namespace sevrel
