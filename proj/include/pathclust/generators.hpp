#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pathclust/paths.hpp"

namespace pathclust {

struct FgnSpec {
    double hurst = 0.5;
    double sigma = 1.0;
    std::size_t n = 1;
    std::uint64_t seed = 0;
};

void validate(const FgnSpec& spec);

/// Autocovariance of fractional Gaussian noise at lag k:
/// sigma^2 / 2 (|k+1|^2H - 2|k|^2H + |k-1|^2H).
double fgn_autocovariance(std::size_t k, double hurst, double sigma = 1.0);

/// Exact sample via Cholesky factorization of the n x n Toeplitz covariance.
/// Cubic in n; refused above `max_n`.
SamplePath fgn_cholesky(const FgnSpec& spec, std::size_t max_n = 4096);

/// Exact sample via circulant embedding of the covariance (length 2(n-1)).
SamplePath fgn_circulant(const FgnSpec& spec);

/// Cumulative sum with a leading zero: output has length n+1.
SamplePath fbm_from_fgn(const SamplePath& increments);

namespace hurst {
struct Constant {
    double value;
};
/// a + b u on u in [0, 1].
struct Linear {
    double a, b;
};
/// low + (high - low) / (1 + exp(-steepness (u - midpoint))).
struct Logistic {
    double low, high, midpoint, steepness;
};
/// Linear interpolation between knots (u, H), u strictly increasing;
/// held constant outside the knot range.
struct Piecewise {
    std::vector<std::pair<double, double>> knots;
};
}  // namespace hurst

using HurstFunction = std::variant<hurst::Constant, hurst::Linear, hurst::Logistic, hurst::Piecewise>;

double evaluate(const HurstFunction& h, double u);
std::string describe(const HurstFunction& h);

struct MbmSpec {
    HurstFunction hurst_fn = hurst::Constant{0.5};
    std::size_t n = 2;
    double dt = 1.0;
    std::uint64_t seed = 0;
    double sigma = 1.0;  ///< overall scale applied to the whole path
};

/// Checks n >= 2, dt > 0, sigma > 0 and H(u) in (0.01, 0.99) on the sample grid.
void validate(const MbmSpec& spec);

/// Riemann-Liouville moving-average multifractional Brownian motion on the
/// grid t_i = i dt, i = 1..n, with H evaluated at u = i / n. All times share
/// one Gaussian driver.
SamplePath mbm_riemann_liouville(const MbmSpec& spec);

}  // namespace pathclust
