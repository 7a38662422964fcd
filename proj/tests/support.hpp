#pragma once

#include <random>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "pathclust/dissimilarity.hpp"
#include "pathclust/generators.hpp"
#include "pathclust/paths.hpp"

namespace support {

inline std::vector<double> random_values(std::mt19937_64& g, std::size_t n, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = nd(g);
    return v;
}

inline pathclust::SamplePath path(std::vector<double> v, std::string id = "p") {
    return pathclust::SamplePath{std::move(v), 1.0, std::move(id)};
}

inline std::vector<double> fgn(double h, std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    return pathclust::fgn_circulant(pathclust::FgnSpec{h, sigma, n, seed}).values;
}

inline oracle::Config to_oracle(const pathclust::DissimilarityConfig& c) {
    oracle::Config o;
    o.inverse_square = c.weight_rule == pathclust::WeightRule::InverseSquare;
    o.sqrt_rule = c.m_rule == pathclust::MRule::Sqrt;
    o.log_damp = c.entry_transform == pathclust::EntryTransform::LogDamp;
    o.center = c.center;
    o.K = c.K;
    return o;
}

inline double rel_diff(double a, double b) {
    const double s = std::max(std::fabs(a), std::fabs(b));
    return s == 0.0 ? 0.0 : std::fabs(a - b) / s;
}

}  // namespace support
