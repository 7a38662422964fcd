#include "pathclust/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pathclust/error.hpp"

namespace pathclust {

std::string_view to_string(AssignmentMode m) {
    return m == AssignmentMode::CentersOnly ? "centers-only" : "literal";
}

AssignmentMode parse_assignment_mode(std::string_view s) {
    if (s == "centers-only") return AssignmentMode::CentersOnly;
    if (s == "literal") return AssignmentMode::Literal;
    throw Error(Errc::InvalidConfig, "unknown assignment mode '" + std::string(s) + "'");
}

void validate_matrix(const DistanceMatrix& d) {
    const std::size_t n = d.size();
    if (n == 0) throw Error(Errc::MalformedMatrix, "empty matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (d(i, i) != 0.0) {
            throw Error(Errc::MalformedMatrix, "nonzero diagonal at " + std::to_string(i));
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = d(i, j);
            if (!std::isfinite(v) || v < 0.0 || v != d(j, i)) {
                throw Error(Errc::MalformedMatrix, "entry (" + std::to_string(i) + ", " +
                                                       std::to_string(j) +
                                                       ") is negative, non-finite or asymmetric");
            }
        }
    }
}

Clustering offline_cluster(const DistanceMatrix& d, int kappa, AssignmentMode mode) {
    const std::size_t n = d.size();
    if (kappa < 1 || static_cast<std::size_t>(kappa) > n) {
        throw Error(Errc::KappaOutOfRange,
                    "kappa=" + std::to_string(kappa) + " with N=" + std::to_string(n));
    }
    validate_matrix(d);
    const auto k_count = static_cast<std::size_t>(kappa);

    Clustering out;
    out.kappa = kappa;
    out.assignment.assign(n, 0);

    if (n == 1) {
        out.centers = {0};
        out.assignment[0] = 1;
        return out;
    }

    // Most distant pair, lexicographically first on ties.
    std::size_t c1 = 0, c2 = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d(i, j) > best) {
                best = d(i, j);
                c1 = i;
                c2 = j;
            }
        }
    }
    out.centers.push_back(c1);
    if (k_count >= 2) out.centers.push_back(c2);

    std::vector<bool> is_center(n, false);
    for (auto c : out.centers) is_center[c] = true;

    // Farthest-first traversal; existing centers are not candidates.
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (auto c : out.centers) nearest[i] = std::min(nearest[i], d(i, c));
    while (out.centers.size() < k_count) {
        std::size_t pick = n;
        double far = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_center[i] && nearest[i] > far) {
                far = nearest[i];
                pick = i;
            }
        }
        out.centers.push_back(pick);
        is_center[pick] = true;
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], d(i, pick));
    }

    for (std::size_t k = 0; k < k_count; ++k) out.assignment[out.centers[k]] = static_cast<int>(k + 1);

    if (mode == AssignmentMode::CentersOnly) {
        for (std::size_t i = 0; i < n; ++i) {
            if (is_center[i]) continue;
            std::size_t label = 0;
            for (std::size_t k = 1; k < k_count; ++k) {
                if (d(i, out.centers[k]) < d(i, out.centers[label])) label = k;
            }
            out.assignment[i] = static_cast<int>(label + 1);
        }
    } else {
        std::vector<std::vector<std::size_t>> members(k_count);
        for (std::size_t k = 0; k < k_count; ++k) members[k].push_back(out.centers[k]);
        for (std::size_t i = 0; i < n; ++i) {
            if (is_center[i]) continue;
            std::size_t label = 0;
            double label_dist = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < k_count; ++k) {
                double dk = std::numeric_limits<double>::infinity();
                for (auto j : members[k]) dk = std::min(dk, d(i, j));
                if (dk < label_dist) {
                    label_dist = dk;
                    label = k;
                }
            }
            members[label].push_back(i);
            out.assignment[i] = static_cast<int>(label + 1);
        }
    }
    return out;
}

OnlineResult online_cluster(const DistanceMatrix& d, int kappa, AssignmentMode mode,
                            std::size_t snapshot_index) {
    const std::size_t n = d.size();
    if (kappa < 1 || static_cast<std::size_t>(kappa) > n) {
        throw Error(Errc::KappaOutOfRange,
                    "kappa=" + std::to_string(kappa) + " with N(t)=" + std::to_string(n));
    }
    validate_matrix(d);
    const auto k_count = static_cast<std::size_t>(kappa);

    OnlineResult result;
    auto& st = result.state;
    st.snapshot_index = snapshot_index;

    for (std::size_t j = k_count; j <= n; ++j) {
        const Clustering sub = offline_cluster(d.leading(j), kappa, mode);
        std::vector<std::size_t> centers(k_count, j);
        for (std::size_t i = 0; i < j; ++i) {
            auto& c = centers[static_cast<std::size_t>(sub.assignment[i] - 1)];
            c = std::min(c, i);
        }
        // candidate clusters are labelled in order of their first member
        std::sort(centers.begin(), centers.end());
        double gamma = k_count >= 2 ? std::numeric_limits<double>::infinity() : 0.0;
        for (std::size_t a = 0; a < k_count; ++a)
            for (std::size_t b = a + 1; b < k_count; ++b) gamma = std::min(gamma, d(centers[a], centers[b]));
        const double w = 1.0 / (static_cast<double>(j) * static_cast<double>(j + 1));
        st.candidate_sizes.push_back(j);
        st.candidate_centers.push_back(std::move(centers));
        st.gammas.push_back(gamma);
        st.weights.push_back(w);
        st.eta += w * gamma;
    }

    auto& c = result.clustering;
    c.kappa = kappa;
    c.centers = st.candidate_centers.back();
    c.assignment.assign(n, 1);
    st.scores.assign(n, std::vector<double>(k_count, 0.0));
    if (k_count == 1) return result;

    st.eta_fallback = !(st.eta > 0.0);
    const auto& last = st.candidate_centers.back();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> raw(k_count, 0.0);
        for (std::size_t k = 0; k < k_count; ++k) {
            if (st.eta_fallback) {
                raw[k] = d(i, last[k]);
                st.scores[i][k] = raw[k];
                continue;
            }
            for (std::size_t q = 0; q < st.gammas.size(); ++q) {
                raw[k] += st.weights[q] * st.gammas[q] * d(i, st.candidate_centers[q][k]);
            }
            st.scores[i][k] = raw[k] / st.eta;
        }
        std::size_t label = 0;
        for (std::size_t k = 1; k < k_count; ++k)
            if (raw[k] < raw[label]) label = k;
        c.assignment[i] = static_cast<int>(label + 1);
    }
    return result;
}

OnlineResult online_cluster_step(const PathDataset& snapshot, int kappa,
                                 const DissimilarityConfig& cfg, Measure measure,
                                 AssignmentMode mode, std::size_t snapshot_index) {
    if (kappa < 1 || static_cast<std::size_t>(kappa) > snapshot.size()) {
        throw Error(Errc::KappaOutOfRange, "kappa=" + std::to_string(kappa) + " with N(t)=" +
                                               std::to_string(snapshot.size()));
    }
    return online_cluster(dissimilarity_matrix(snapshot, measure, cfg), kappa, mode, snapshot_index);
}

OnlineClusterer::OnlineClusterer(int kappa, DissimilarityConfig cfg, Measure measure,
                                 AssignmentMode mode)
    : kappa_(kappa), cfg_(cfg), measure_(measure), mode_(mode) {
    validate_config(cfg_);
}

OnlineResult OnlineClusterer::step(const PathDataset& snapshot) {
    validate_dataset(snapshot);
    if (kappa_ < 1 || static_cast<std::size_t>(kappa_) > snapshot.size()) {
        throw Error(Errc::KappaOutOfRange, "kappa=" + std::to_string(kappa_) + " with N(t)=" +
                                               std::to_string(snapshot.size()));
    }
    DistanceMatrix next;
    if (previous_) {
        check_snapshot_extends(*previous_, snapshot);
        next = dissimilarity_matrix_update(*previous_, matrix_, snapshot, measure_, cfg_);
    } else {
        next = dissimilarity_matrix(snapshot, measure_, cfg_);
    }
    auto result = online_cluster(next, kappa_, mode_, t_ + 1);
    ++t_;
    matrix_ = std::move(next);
    previous_ = snapshot;
    return result;
}

namespace {

// Minimum-cost perfect assignment on a square cost matrix (Hungarian
// method with potentials). Returns row -> column.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

double misclustering_rate(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size() || predicted.empty()) {
        throw Error(Errc::ArityMismatch, std::to_string(predicted.size()) + " predicted vs " +
                                             std::to_string(truth.size()) + " truth labels");
    }
    int labels = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] < 1 || truth[i] < 1) {
            throw Error(Errc::ArityMismatch, "labels must be >= 1");
        }
        labels = std::max({labels, predicted[i], truth[i]});
    }
    const auto k = static_cast<std::size_t>(labels);
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        cost[static_cast<std::size_t>(predicted[i] - 1)][static_cast<std::size_t>(truth[i] - 1)] -= 1.0;
    }
    const auto match = hungarian(cost);
    double agree = 0.0;
    for (std::size_t r = 0; r < k; ++r) agree -= cost[r][match[r]];
    const double total = static_cast<double>(predicted.size());
    return (total - agree) / total;
}

double misclustering_rate(const Clustering& predicted, std::span<const int> truth) {
    for (int t : truth) {
        if (t > predicted.kappa) {
            throw Error(Errc::ArityMismatch, "truth label " + std::to_string(t) + " exceeds kappa=" +
                                                 std::to_string(predicted.kappa));
        }
    }
    return misclustering_rate(std::span<const int>(predicted.assignment), truth);
}

}  // namespace pathclust
