#ifndef TWINPHOTON_RANDOM_HPP
#define TWINPHOTON_RANDOM_HPP

#include <cstdint>
#include <random>

namespace twinphoton
{

// Independent sub-streams derived from one run seed. Each process gets its own
// engine, so enabling or disabling one process leaves the others' draws intact.
enum class RandomProcess : std::uint64_t
{
    pair_emission = 1,
    routing = 2,
    survival = 3,
    dark1 = 4,
    dark2 = 5,
    jitter = 6,
    spectrum = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, RandomProcess process)
{
    const auto tag = static_cast<std::uint64_t>(process);
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(tag));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(tag)};
    return std::mt19937_64(seq);
}

} // namespace twinphoton

#endif // TWINPHOTON_RANDOM_HPP
