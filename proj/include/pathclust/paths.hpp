#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pathclust {

/// One observed sample path of a scalar process on a regular grid.
struct SamplePath {
    std::vector<double> values;
    double dt = 1.0;
    std::string id;

    std::size_t size() const noexcept { return values.size(); }
    std::span<const double> view() const noexcept { return values; }

    friend bool operator==(const SamplePath&, const SamplePath&) = default;
};

/// Ordered collection of paths with optional 1-based ground-truth labels.
/// Order is significant: tie-breaking and online candidate generation work
/// on path indices.
struct PathDataset {
    std::vector<SamplePath> paths;
    std::optional<std::vector<int>> truth;

    std::size_t size() const noexcept { return paths.size(); }

    friend bool operator==(const PathDataset&, const PathDataset&) = default;
};

/// Partition of path indices into kappa clusters.
/// `assignment[i]` is the 1-based label of path i; `centers[k]` is the
/// 0-based path index designated as center of label k+1.
struct Clustering {
    std::vector<int> assignment;
    std::vector<std::size_t> centers;
    int kappa = 0;

    friend bool operator==(const Clustering&, const Clustering&) = default;
};

void validate_path(const SamplePath& path);

/// Checks every dataset invariant and returns the dataset unchanged.
/// Throws Error{EmptyDataset | NonFiniteValue | InvalidPath | LabelArityMismatch}.
const PathDataset& validate_dataset(const PathDataset& dataset);

/// Checks that every path of `previous` reappears at the same index in
/// `next` with its old values as a prefix. Throws Error{SnapshotNotPrefix}.
void check_snapshot_extends(const PathDataset& previous, const PathDataset& next);

/// Checks the structural invariants of a clustering over `n_paths` paths.
/// With `require_pinned_centers`, center k must carry label k+1.
void validate_clustering(const Clustering& clustering, std::size_t n_paths,
                         bool require_pinned_centers = true);

}  // namespace pathclust
