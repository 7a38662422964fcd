#pragma once

#include <cstddef>
#include <span>

namespace pathclust::detail {

// Cascade summation; rounding error grows as O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> v) {
    constexpr std::size_t block = 16;
    if (v.size() <= block) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace pathclust::detail
