#include "pathclust/paths.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pathclust/error.hpp"

namespace pathclust {

void validate_path(const SamplePath& path) {
    if (path.values.empty()) {
        throw Error(Errc::InvalidPath, "path '" + path.id + "' is empty");
    }
    if (!(path.dt > 0.0) || !std::isfinite(path.dt)) {
        throw Error(Errc::InvalidPath, "path '" + path.id + "' has non-positive dt");
    }
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        if (!std::isfinite(path.values[i])) {
            throw Error(Errc::NonFiniteValue,
                        "path '" + path.id + "' position " + std::to_string(i + 1) + " (1-based)");
        }
    }
}

const PathDataset& validate_dataset(const PathDataset& dataset) {
    if (dataset.paths.empty()) {
        throw Error(Errc::EmptyDataset, "dataset has no paths");
    }
    for (const auto& p : dataset.paths) validate_path(p);
    if (dataset.truth) {
        const auto& t = *dataset.truth;
        if (t.size() != dataset.paths.size()) {
            throw Error(Errc::LabelArityMismatch,
                        std::to_string(dataset.paths.size()) + " paths but " +
                            std::to_string(t.size()) + " truth labels");
        }
        for (int label : t) {
            if (label < 1) {
                throw Error(Errc::LabelArityMismatch,
                            "truth labels must be >= 1, got " + std::to_string(label));
            }
        }
    }
    return dataset;
}

void check_snapshot_extends(const PathDataset& previous, const PathDataset& next) {
    if (next.size() < previous.size()) {
        throw Error(Errc::SnapshotNotPrefix, "snapshot lost paths (" +
                                                 std::to_string(previous.size()) + " -> " +
                                                 std::to_string(next.size()) + ")");
    }
    for (std::size_t i = 0; i < previous.size(); ++i) {
        const auto& a = previous.paths[i].values;
        const auto& b = next.paths[i].values;
        if (b.size() < a.size() || !std::equal(a.begin(), a.end(), b.begin())) {
            throw Error(Errc::SnapshotNotPrefix,
                        "path " + std::to_string(i) + " ('" + next.paths[i].id +
                            "') does not extend its previous observation");
        }
    }
}

void validate_clustering(const Clustering& c, std::size_t n_paths, bool require_pinned_centers) {
    if (c.kappa < 1) throw Error(Errc::KappaOutOfRange, "kappa must be >= 1");
    if (c.assignment.size() != n_paths) {
        throw Error(Errc::ArityMismatch, "assignment does not cover every path");
    }
    for (int label : c.assignment) {
        if (label < 1 || label > c.kappa) {
            throw Error(Errc::ArityMismatch, "label " + std::to_string(label) + " outside 1..kappa");
        }
    }
    if (c.centers.size() != static_cast<std::size_t>(c.kappa)) {
        throw Error(Errc::ArityMismatch, "expected kappa centers");
    }
    std::set<std::size_t> seen;
    for (std::size_t k = 0; k < c.centers.size(); ++k) {
        const auto idx = c.centers[k];
        if (idx >= n_paths || !seen.insert(idx).second) {
            throw Error(Errc::ArityMismatch, "centers must be distinct valid path indices");
        }
        if (require_pinned_centers && c.assignment[idx] != static_cast<int>(k + 1)) {
            throw Error(Errc::ArityMismatch,
                        "center " + std::to_string(k + 1) + " is not in its own cluster");
        }
    }
}

}  // namespace pathclust
