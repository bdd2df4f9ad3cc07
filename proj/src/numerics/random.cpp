#include "concord/error.hpp"
#include "concord/numerics.hpp"

namespace concord {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(mix(seed + kGolden) ^ mix(mix(stream) + 0x632be59bd9b4e019ULL)) {}

std::uint64_t RandomSource::next_u64() { return mix(key_ + kGolden * ++counter_); }

double RandomSource::uniform() {
    // Odd multiples of 2^-53: never 0 or 1, and 1 - u is exact.
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomSource::normal() { return normal_quantile(uniform()); }

std::size_t RandomSource::below(std::size_t n) {
    if (n == 0) throw DomainError("RandomSource::below: n must be positive");
    // Lemire's multiply-shift; bias is below 2^-64 * n and irrelevant here.
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(next_u64()) * n) >> 64);
}

RandomSource RandomSource::split(std::uint64_t substream) const {
    return RandomSource(seed_, mix(stream_ * kGolden + substream + 1));
}

}  // namespace concord
