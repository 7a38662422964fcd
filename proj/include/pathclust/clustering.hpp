#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pathclust/dissimilarity.hpp"
#include "pathclust/paths.hpp"

namespace pathclust {

enum class AssignmentMode {
    CentersOnly,  ///< nearest of the kappa centers
    Literal,      ///< nearest current member, clusters grow in index order
};

std::string_view to_string(AssignmentMode m);
AssignmentMode parse_assignment_mode(std::string_view s);

/// Checks square, finite, exactly symmetric, nonnegative, zero diagonal.
void validate_matrix(const DistanceMatrix& d);

/// Farthest-first center selection seeded with the most distant pair,
/// followed by nearest-center assignment. Ties go to the lowest index
/// (lexicographic for pairs).
Clustering offline_cluster(const DistanceMatrix& d, int kappa,
                           AssignmentMode mode = AssignmentMode::CentersOnly);

/// Candidate center sets and their weights for one online step.
struct OnlineState {
    std::size_t snapshot_index = 0;
    std::vector<std::size_t> candidate_sizes;  ///< j = kappa .. N(t)
    std::vector<std::vector<std::size_t>> candidate_centers;
    std::vector<double> gammas;
    std::vector<double> weights;
    double eta = 0.0;
    bool eta_fallback = false;  ///< eta was zero; nearest-center fallback used
    std::vector<std::vector<double>> scores;  ///< per path, per label; normalized by eta
};

struct OnlineResult {
    Clustering clustering;
    OnlineState state;
};

/// One step of the online algorithm on a precomputed matrix of the current
/// snapshot. For every prefix size j = kappa..N the offline algorithm is
/// rerun on the first j paths, candidate centers are the minimum index per
/// cluster, and each path goes to the label minimizing the gamma-weighted
/// sum of distances to candidate centers.
OnlineResult online_cluster(const DistanceMatrix& d, int kappa,
                            AssignmentMode mode = AssignmentMode::CentersOnly,
                            std::size_t snapshot_index = 1);

/// Convenience: computes the matrix for `snapshot` and runs online_cluster.
OnlineResult online_cluster_step(const PathDataset& snapshot, int kappa,
                                 const DissimilarityConfig& cfg, Measure measure,
                                 AssignmentMode mode = AssignmentMode::CentersOnly,
                                 std::size_t snapshot_index = 1);

/// Feeds snapshots in order, verifying the prefix property and reusing
/// matrix entries for paths that did not change.
class OnlineClusterer {
public:
    OnlineClusterer(int kappa, DissimilarityConfig cfg, Measure measure,
                    AssignmentMode mode = AssignmentMode::CentersOnly);

    OnlineResult step(const PathDataset& snapshot);

    std::size_t steps() const noexcept { return t_; }
    const DistanceMatrix& matrix() const noexcept { return matrix_; }

private:
    int kappa_;
    DissimilarityConfig cfg_;
    Measure measure_;
    AssignmentMode mode_;
    std::size_t t_ = 0;
    std::optional<PathDataset> previous_;
    DistanceMatrix matrix_;
};

/// Fraction of mismatched paths under the best injective matching of
/// truth labels onto predicted labels.
double misclustering_rate(std::span<const int> predicted, std::span<const int> truth);
double misclustering_rate(const Clustering& predicted, std::span<const int> truth);

}  // namespace pathclust
