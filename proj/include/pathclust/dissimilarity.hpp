#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathclust/paths.hpp"

namespace pathclust {

enum class WeightRule {
    HarmonicTelescoping,  ///< w_j = 1 / (j (j + 1)); sums to 1
    InverseSquare,        ///< w_j = 1 / j^2
};

enum class MRule {
    Log2,  ///< m_n = max(1, floor(log2 n))
    Sqrt,  ///< m_n = max(1, floor(sqrt n))
};

enum class EntryTransform {
    Identity,
    LogDamp,  ///< t(x) = sign(x) log(1 + |x|)
};

enum class Measure {
    Covariance,  ///< empirical second-moment dissimilarity on the raw paths
    Local,       ///< average over localized increment windows
};

struct DissimilarityConfig {
    WeightRule weight_rule = WeightRule::HarmonicTelescoping;
    MRule m_rule = MRule::Log2;
    EntryTransform entry_transform = EntryTransform::Identity;
    int K = 10;
    bool center = false;

    friend bool operator==(const DissimilarityConfig&, const DissimilarityConfig&) = default;
};

void validate_config(const DissimilarityConfig& cfg);

double weight(WeightRule rule, std::size_t j);
std::size_t max_matrix_size(MRule rule, std::size_t n);
double apply_transform(EntryTransform t, double x);

std::string_view to_string(WeightRule r);
std::string_view to_string(MRule r);
std::string_view to_string(EntryTransform t);
std::string_view to_string(Measure m);
WeightRule parse_weight_rule(std::string_view s);
MRule parse_m_rule(std::string_view s);
EntryTransform parse_transform(std::string_view s);
Measure parse_measure(std::string_view s);

/// Dense square m x m matrix, row-major.
struct MomentMatrix {
    std::size_t m = 0;
    std::vector<double> entries;

    double operator()(std::size_t a, std::size_t b) const { return entries[a * m + b]; }
    double& operator()(std::size_t a, std::size_t b) { return entries[a * m + b]; }
};

/// Average outer product of the length-m windows of `path` starting at
/// 1-based positions l .. n-m+1. No mean is subtracted.
MomentMatrix segment_moment(std::span<const double> path, std::size_t l, std::size_t m,
                            std::size_t n);

/// Frobenius norm of transform(a) - transform(b).
double matrix_distance(const MomentMatrix& a, const MomentMatrix& b,
                       EntryTransform transform = EntryTransform::Identity);

/// Weighted double sum over matrix sizes m = 1..m_n and start offsets
/// l = 1..n-m+1 of w_m w_l rho(nu(x1, l, m), nu(x2, l, m)), n = min length.
double empirical_dissimilarity(std::span<const double> x1, std::span<const double> x2,
                               const DissimilarityConfig& cfg);
double empirical_dissimilarity(const SamplePath& x1, const SamplePath& x2,
                               const DissimilarityConfig& cfg);

/// The K+1 consecutive first differences of `path` starting at the 1-based
/// index i: (z[i+1]-z[i], ..., z[i+K+1]-z[i+K]).
SamplePath localized_increments(const SamplePath& path, std::size_t i, int K);

/// Mean of empirical_dissimilarity over aligned localized increment
/// windows i = 1 .. n-K-1.
double local_dissimilarity(std::span<const double> z1, std::span<const double> z2,
                           const DissimilarityConfig& cfg);
double local_dissimilarity(const SamplePath& z1, const SamplePath& z2,
                           const DissimilarityConfig& cfg);

double dissimilarity(Measure measure, std::span<const double> a, std::span<const double> b,
                     const DissimilarityConfig& cfg);

/// Symmetric N x N matrix of pairwise dissimilarities, row-major.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
    DistanceMatrix(std::size_t n, std::vector<double> data);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

    /// Sets (i, j) and (j, i) together.
    void set(std::size_t i, std::size_t j, double v) {
        data_[i * n_ + j] = v;
        data_[j * n_ + i] = v;
    }

    /// Leading j x j block.
    DistanceMatrix leading(std::size_t j) const;

    const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Pairwise matrix over a dataset. Unordered pairs are computed
/// concurrently with OpenMP; the result does not depend on the schedule.
DistanceMatrix dissimilarity_matrix(const PathDataset& dataset, Measure measure,
                                    const DissimilarityConfig& cfg);

/// Single-threaded reference with the same contract.
DistanceMatrix dissimilarity_matrix_serial(const PathDataset& dataset, Measure measure,
                                           const DissimilarityConfig& cfg);

/// Recomputes only entries whose paths differ from `previous`; pairs of
/// unchanged paths (same index, identical values) are copied over.
DistanceMatrix dissimilarity_matrix_update(const PathDataset& previous,
                                           const DistanceMatrix& previous_matrix,
                                           const PathDataset& next, Measure measure,
                                           const DissimilarityConfig& cfg);

}  // namespace pathclust
