#pragma once

#include <cstdint>
#include <initializer_list>

namespace pathclust {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Child seed for a named sub-stream. Stream splitting is a hash chain
/// over the path of integer tags, e.g. derive_seed(master, {length, rep, path}),
/// so the same tags give the same seed on every platform and run.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) noexcept;

/// Counter-based generator: draw k of stream `key` is a pure function of
/// (key, k). There is no hidden state beyond the counter, so any draw can
/// be regenerated independently.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) noexcept : key_(mix64(key ^ 0x6A09E667F3BCC909ULL)) {}

    std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix64(key_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform(std::uint64_t counter) const noexcept {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by inversion of the CDF.
    double normal(std::uint64_t counter) const noexcept;

private:
    std::uint64_t key_;
};

/// Inverse of the standard normal CDF, p in (0, 1).
/// Wichura's AS241 (PPND16), relative accuracy about 1e-16.
double normal_quantile(double p) noexcept;

}  // namespace pathclust
