#include "pathclust/dissimilarity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>

#include "pairwise_sum.hpp"
#include "pathclust/error.hpp"

namespace pathclust {

void validate_config(const DissimilarityConfig& cfg) {
    if (cfg.K < 1) throw Error(Errc::InvalidConfig, "K must be >= 1, got " + std::to_string(cfg.K));
}

double weight(WeightRule rule, std::size_t j) {
    const double x = static_cast<double>(j);
    switch (rule) {
        case WeightRule::HarmonicTelescoping: return 1.0 / (x * (x + 1.0));
        case WeightRule::InverseSquare: return 1.0 / (x * x);
    }
    return 0.0;
}

std::size_t max_matrix_size(MRule rule, std::size_t n) {
    if (n <= 1) return 1;
    std::size_t m = 1;
    switch (rule) {
        case MRule::Log2: m = static_cast<std::size_t>(std::bit_width(n) - 1); break;
        case MRule::Sqrt: {
            auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
            while (r * r > n) --r;
            while ((r + 1) * (r + 1) <= n) ++r;
            m = r;
            break;
        }
    }
    return std::clamp<std::size_t>(m, 1, n);
}

double apply_transform(EntryTransform t, double x) {
    switch (t) {
        case EntryTransform::Identity: return x;
        case EntryTransform::LogDamp: return std::copysign(std::log1p(std::fabs(x)), x);
    }
    return x;
}

std::string_view to_string(WeightRule r) {
    return r == WeightRule::HarmonicTelescoping ? "harmonic_telescoping" : "inverse_square";
}
std::string_view to_string(MRule r) { return r == MRule::Log2 ? "log2" : "sqrt"; }
std::string_view to_string(EntryTransform t) {
    return t == EntryTransform::Identity ? "identity" : "log-damp";
}
std::string_view to_string(Measure m) { return m == Measure::Covariance ? "cov" : "local"; }

WeightRule parse_weight_rule(std::string_view s) {
    if (s == "harmonic_telescoping") return WeightRule::HarmonicTelescoping;
    if (s == "inverse_square") return WeightRule::InverseSquare;
    throw Error(Errc::InvalidConfig, "unknown weight_rule '" + std::string(s) + "'");
}
MRule parse_m_rule(std::string_view s) {
    if (s == "log2") return MRule::Log2;
    if (s == "sqrt") return MRule::Sqrt;
    throw Error(Errc::InvalidConfig, "unknown m_rule '" + std::string(s) + "'");
}
EntryTransform parse_transform(std::string_view s) {
    if (s == "identity") return EntryTransform::Identity;
    if (s == "log-damp") return EntryTransform::LogDamp;
    throw Error(Errc::InvalidConfig, "unknown entry_transform '" + std::string(s) + "'");
}
Measure parse_measure(std::string_view s) {
    if (s == "cov" || s == "covariance") return Measure::Covariance;
    if (s == "local") return Measure::Local;
    throw Error(Errc::InvalidConfig, "unknown measure '" + std::string(s) + "'");
}

MomentMatrix segment_moment(std::span<const double> path, std::size_t l, std::size_t m,
                            std::size_t n) {
    if (l < 1 || m < 1 || n > path.size() || l + m - 1 > n) {
        throw Error(Errc::WindowExceedsPath,
                    "l=" + std::to_string(l) + " m=" + std::to_string(m) + " n=" +
                        std::to_string(n) + " length=" + std::to_string(path.size()));
    }
    MomentMatrix out{m, std::vector<double>(m * m, 0.0)};
    const std::size_t last = n - m + 1;  // 1-based start of the final window
    for (std::size_t i = l; i <= last; ++i) {
        const double* w = path.data() + (i - 1);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) out(a, b) += w[a] * w[b];
    }
    const double count = static_cast<double>(n - m - l + 2);
    for (double& e : out.entries) e /= count;
    return out;
}

double matrix_distance(const MomentMatrix& a, const MomentMatrix& b, EntryTransform transform) {
    if (a.m != b.m || a.entries.size() != b.entries.size()) {
        throw Error(Errc::DimensionMismatch,
                    std::to_string(a.m) + "x" + std::to_string(a.m) + " vs " +
                        std::to_string(b.m) + "x" + std::to_string(b.m));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const double d = apply_transform(transform, a.entries[i]) -
                         apply_transform(transform, b.entries[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

namespace {

// Transformed upper-triangle entries of nu(x, l, m) for every start offset
// l = 1..n-m+1. Block q enumerates (k, a) with k = 0..m-1, a = 0..m-1-k and
// holds entry (a, a+k) for all start offsets contiguously.
std::size_t block_size(std::size_t n, std::size_t m) { return m * (m + 1) / 2 * (n - m + 1); }

// Prefix sums of lag products: p[k * (n + 1) + j] = sum_{q < j} x[q] x[q + k]
// for j = 0 .. n - k. The (a, a+k) entry summed over windows starting at
// 0-based s .. n-m is p[k][n-m+a+1] - p[k][s+a].
void lag_prefix(std::span<const double> x, std::size_t n, std::size_t lags, double* p) {
    const std::size_t stride = n + 1;
    for (std::size_t k = 0; k < lags; ++k) {
        double* row = p + k * stride;
        row[0] = 0.0;
        for (std::size_t j = 0; j + k < n; ++j) row[j + 1] = row[j] + x[j] * x[j + k];
    }
}

void moment_block(const double* prefix, std::size_t n, std::size_t m, EntryTransform transform,
                  double* out) {
    const std::size_t starts = n - m + 1;
    std::size_t q = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double* row = prefix + k * (n + 1);
        for (std::size_t a = 0; a + k < m; ++a, ++q) {
            const double hi = row[n - m + a + 1];
            const double* lo = row + a;
            double* dst = out + q * starts;
            for (std::size_t s = 0; s < starts; ++s) dst[s] = (hi - lo[s]) / static_cast<double>(starts - s);
            if (transform != EntryTransform::Identity) {
                for (std::size_t s = 0; s < starts; ++s) dst[s] = apply_transform(transform, dst[s]);
            }
        }
    }
}

struct Scratch {
    std::vector<double> acc, terms, per_m, windows;
    std::vector<double> cx, cy, px, py, fx, fy, dx, dy;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

// w_m sum_l w_l ||F_x(l) - F_y(l)||_F for one matrix size m.
double block_distance(const double* fx, const double* fy, std::size_t n, std::size_t m,
                      WeightRule rule, Scratch& ws) {
    const std::size_t starts = n - m + 1;
    ws.acc.assign(starts, 0.0);
    double* acc = ws.acc.data();
    std::size_t q = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double mult = k == 0 ? 1.0 : 2.0;
        for (std::size_t a = 0; a + k < m; ++a, ++q) {
            const double* bx = fx + q * starts;
            const double* by = fy + q * starts;
            for (std::size_t s = 0; s < starts; ++s) {
                const double t = bx[s] - by[s];
                acc[s] += mult * t * t;
            }
        }
    }
    ws.terms.resize(starts);
    for (std::size_t s = 0; s < starts; ++s) ws.terms[s] = weight(rule, s + 1) * std::sqrt(acc[s]);
    return weight(rule, m) * detail::pairwise_sum(ws.terms);
}

std::span<const double> prepared(std::span<const double> x, std::size_t n, bool center,
                                 std::vector<double>& buf) {
    if (!center) return x.first(n);
    const auto head = x.first(n);
    const double mean = detail::pairwise_sum(head) / static_cast<double>(n);
    buf.resize(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = head[i] - mean;
    return buf;
}

// Offsets of each m block inside the feature vector of one path (or window).
std::vector<std::size_t> block_offsets(std::size_t n, std::size_t mn) {
    std::vector<std::size_t> off(mn + 1, 0);
    for (std::size_t m = 1; m <= mn; ++m) off[m] = off[m - 1] + block_size(n, m);
    return off;
}

// All transformed moment blocks m = 1..mn of the first n entries of x.
void path_features(std::span<const double> x, std::size_t n, std::size_t mn,
                   const DissimilarityConfig& cfg, const std::vector<std::size_t>& off,
                   std::vector<double>& prefix, std::vector<double>& centered_buf, double* out) {
    const auto v = prepared(x, n, cfg.center, centered_buf);
    prefix.resize(mn * (n + 1));
    lag_prefix(v, n, mn, prefix.data());
    for (std::size_t m = 1; m <= mn; ++m) moment_block(prefix.data(), n, m, cfg.entry_transform, out + off[m - 1]);
}

double feature_distance(const double* fx, const double* fy, std::size_t n, std::size_t mn,
                        const std::vector<std::size_t>& off, WeightRule rule, Scratch& ws) {
    ws.per_m.resize(mn);
    for (std::size_t m = 1; m <= mn; ++m) {
        const double v = block_distance(fx + off[m - 1], fy + off[m - 1], n, m, rule, ws);
        ws.per_m[m - 1] = v;
    }
    return detail::pairwise_sum(ws.per_m);
}

// Features of every localized increment window of one path, window-major.
void local_features(std::span<const double> z, std::size_t n, std::size_t K,
                    const DissimilarityConfig& cfg, std::vector<double>& out, Scratch& ws) {
    const std::size_t len = K + 1;
    const std::size_t count = n - K - 1;
    const std::size_t mn = max_matrix_size(cfg.m_rule, len);
    const auto off = block_offsets(len, mn);
    ws.dx.resize(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) ws.dx[j] = z[j + 1] - z[j];
    out.resize(count * off[mn]);
    for (std::size_t w = 0; w < count; ++w) {
        path_features(std::span<const double>(ws.dx).subspan(w, len), len, mn, cfg, off, ws.px, ws.cx,
                      out.data() + w * off[mn]);
    }
}

double local_feature_distance(const double* fx, const double* fy, std::size_t n, std::size_t K,
                              const DissimilarityConfig& cfg, Scratch& ws) {
    const std::size_t len = K + 1;
    const std::size_t count = n - K - 1;
    const std::size_t mn = max_matrix_size(cfg.m_rule, len);
    const auto off = block_offsets(len, mn);
    std::vector<double> windows(count);
    for (std::size_t w = 0; w < count; ++w) {
        windows[w] = feature_distance(fx + w * off[mn], fy + w * off[mn], len, mn, off, cfg.weight_rule, ws);
    }
    return detail::pairwise_sum(windows) / static_cast<double>(count);
}

void check_lengths(Measure measure, std::size_t n, const DissimilarityConfig& cfg) {
    if (measure == Measure::Covariance) {
        if (n < 2) throw Error(Errc::PathTooShort, "need n >= 2, got n=" + std::to_string(n));
    } else {
        const auto K = static_cast<std::size_t>(cfg.K);
        if (n < K + 3) {
            throw Error(Errc::PathTooShort,
                        "need n >= K+3=" + std::to_string(K + 3) + ", got n=" + std::to_string(n));
        }
    }
}

}  // namespace

double empirical_dissimilarity(std::span<const double> x1, std::span<const double> x2,
                               const DissimilarityConfig& cfg) {
    validate_config(cfg);
    const std::size_t n = std::min(x1.size(), x2.size());
    check_lengths(Measure::Covariance, n, cfg);
    auto& ws = scratch();
    const std::size_t mn = max_matrix_size(cfg.m_rule, n);
    const auto off = block_offsets(n, mn);
    ws.fx.resize(off[mn]);
    ws.fy.resize(off[mn]);
    path_features(x1, n, mn, cfg, off, ws.px, ws.cx, ws.fx.data());
    path_features(x2, n, mn, cfg, off, ws.py, ws.cy, ws.fy.data());
    return feature_distance(ws.fx.data(), ws.fy.data(), n, mn, off, cfg.weight_rule, ws);
}

double empirical_dissimilarity(const SamplePath& x1, const SamplePath& x2,
                               const DissimilarityConfig& cfg) {
    return empirical_dissimilarity(x1.view(), x2.view(), cfg);
}

SamplePath localized_increments(const SamplePath& path, std::size_t i, int K) {
    if (K < 1 || i < 1 || i + static_cast<std::size_t>(K) + 1 > path.size()) {
        throw Error(Errc::WindowExceedsPath, "i=" + std::to_string(i) + " K=" + std::to_string(K) +
                                                 " length=" + std::to_string(path.size()));
    }
    SamplePath out;
    out.dt = path.dt;
    out.id = path.id + "@" + std::to_string(i);
    out.values.reserve(static_cast<std::size_t>(K) + 1);
    for (std::size_t j = i; j <= i + static_cast<std::size_t>(K); ++j) {
        out.values.push_back(path.values[j] - path.values[j - 1]);
    }
    return out;
}

double local_dissimilarity(std::span<const double> z1, std::span<const double> z2,
                           const DissimilarityConfig& cfg) {
    validate_config(cfg);
    const std::size_t n = std::min(z1.size(), z2.size());
    check_lengths(Measure::Local, n, cfg);
    auto& ws = scratch();
    const auto K = static_cast<std::size_t>(cfg.K);
    std::vector<double> f1, f2;
    local_features(z1, n, K, cfg, f1, ws);
    local_features(z2, n, K, cfg, f2, ws);
    return local_feature_distance(f1.data(), f2.data(), n, K, cfg, ws);
}

double local_dissimilarity(const SamplePath& z1, const SamplePath& z2,
                           const DissimilarityConfig& cfg) {
    return local_dissimilarity(z1.view(), z2.view(), cfg);
}

double dissimilarity(Measure measure, std::span<const double> a, std::span<const double> b,
                     const DissimilarityConfig& cfg) {
    return measure == Measure::Covariance ? empirical_dissimilarity(a, b, cfg)
                                          : local_dissimilarity(a, b, cfg);
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> data)
    : n_(n), data_(std::move(data)) {
    if (data_.size() != n * n) throw Error(Errc::MalformedMatrix, "matrix is not square");
}

namespace {

struct Pair {
    std::size_t i, j;
};

std::vector<Pair> upper_pairs(std::size_t n) {
    std::vector<Pair> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
    return pairs;
}

Error pair_error(const Pair& p, const PathDataset& ds, const Error& e) {
    return Error(e.code(), "pair (" + std::to_string(p.i) + ", " + std::to_string(p.j) + ") ['" +
                               ds.paths[p.i].id + "', '" + ds.paths[p.j].id + "']: " + e.what());
}

// Pairs of paths with differing lengths: each pair is evaluated on its own
// common prefix. The first failing pair in list order wins regardless of
// which thread saw it.
void fill_pairs_direct(const PathDataset& ds, const std::vector<Pair>& pairs, Measure measure,
                       const DissimilarityConfig& cfg, DistanceMatrix& out, bool parallel) {
    std::vector<double> values(pairs.size(), 0.0);
    std::vector<std::optional<Error>> errors(pairs.size());
    const auto count = static_cast<std::ptrdiff_t>(pairs.size());

#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (std::ptrdiff_t q = 0; q < count; ++q) {
        const auto& p = pairs[static_cast<std::size_t>(q)];
        try {
            values[static_cast<std::size_t>(q)] =
                dissimilarity(measure, ds.paths[p.i].view(), ds.paths[p.j].view(), cfg);
        } catch (const Error& e) {
            errors[static_cast<std::size_t>(q)] = pair_error(p, ds, e);
        }
    }
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        if (errors[q]) throw *errors[q];
        out.set(pairs[q].i, pairs[q].j, values[q]);
    }
}

// Equal-length paths: moment features are computed once per path and
// shared by all pairs. Covariance features are built one matrix size at a
// time to bound memory; the per-pair summation order matches
// empirical_dissimilarity exactly.
void fill_pairs_covariance(const PathDataset& ds, const std::vector<Pair>& pairs,
                           const std::vector<std::size_t>& involved, std::size_t n,
                           const DissimilarityConfig& cfg, DistanceMatrix& out, bool parallel) {
    const std::size_t mn = max_matrix_size(cfg.m_rule, n);
    const auto off = block_offsets(n, mn);
    const std::size_t np = ds.size();
    std::vector<std::vector<double>> prefix(np);
    const auto n_involved = static_cast<std::ptrdiff_t>(involved.size());

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (std::ptrdiff_t u = 0; u < n_involved; ++u) {
        const std::size_t i = involved[static_cast<std::size_t>(u)];
        auto& ws = scratch();
        const auto v = prepared(ds.paths[i].view(), n, cfg.center, ws.cx);
        prefix[i].resize(mn * (n + 1));
        lag_prefix(v, n, mn, prefix[i].data());
    }

    std::vector<double> partial(pairs.size() * mn, 0.0);
    std::vector<std::vector<double>> blocks(np);
    const auto n_pairs = static_cast<std::ptrdiff_t>(pairs.size());
    for (std::size_t m = 1; m <= mn; ++m) {
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
        for (std::ptrdiff_t u = 0; u < n_involved; ++u) {
            const std::size_t i = involved[static_cast<std::size_t>(u)];
            blocks[i].resize(block_size(n, m));
            moment_block(prefix[i].data(), n, m, cfg.entry_transform, blocks[i].data());
        }
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
        for (std::ptrdiff_t q = 0; q < n_pairs; ++q) {
            const auto& p = pairs[static_cast<std::size_t>(q)];
            partial[static_cast<std::size_t>(q) * mn + (m - 1)] =
                block_distance(blocks[p.i].data(), blocks[p.j].data(), n, m, cfg.weight_rule, scratch());
        }
    }
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        out.set(pairs[q].i, pairs[q].j,
                detail::pairwise_sum(std::span<const double>(partial).subspan(q * mn, mn)));
    }
}

void fill_pairs_local(const PathDataset& ds, const std::vector<Pair>& pairs,
                      const std::vector<std::size_t>& involved, std::size_t n,
                      const DissimilarityConfig& cfg, DistanceMatrix& out, bool parallel) {
    const auto K = static_cast<std::size_t>(cfg.K);
    std::vector<std::vector<double>> features(ds.size());
    const auto n_involved = static_cast<std::ptrdiff_t>(involved.size());

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (std::ptrdiff_t u = 0; u < n_involved; ++u) {
        const std::size_t i = involved[static_cast<std::size_t>(u)];
        local_features(ds.paths[i].view(), n, K, cfg, features[i], scratch());
    }

    std::vector<double> values(pairs.size(), 0.0);
    const auto n_pairs = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (std::ptrdiff_t q = 0; q < n_pairs; ++q) {
        const auto& p = pairs[static_cast<std::size_t>(q)];
        values[static_cast<std::size_t>(q)] =
            local_feature_distance(features[p.i].data(), features[p.j].data(), n, K, cfg, scratch());
    }
    for (std::size_t q = 0; q < pairs.size(); ++q) out.set(pairs[q].i, pairs[q].j, values[q]);
}

void fill_pairs(const PathDataset& ds, const std::vector<Pair>& pairs, Measure measure,
                const DissimilarityConfig& cfg, DistanceMatrix& out, bool parallel) {
    if (pairs.empty()) return;
    std::vector<bool> used(ds.size(), false);
    for (const auto& p : pairs) used[p.i] = used[p.j] = true;
    std::vector<std::size_t> involved;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (used[i]) involved.push_back(i);

    const std::size_t n = ds.paths[involved.front()].size();
    const bool equal = std::all_of(involved.begin(), involved.end(),
                                   [&](std::size_t i) { return ds.paths[i].size() == n; });
    if (!equal) {
        fill_pairs_direct(ds, pairs, measure, cfg, out, parallel);
        return;
    }
    try {
        check_lengths(measure, n, cfg);
    } catch (const Error& e) {
        throw pair_error(pairs.front(), ds, e);
    }
    if (measure == Measure::Covariance) {
        fill_pairs_covariance(ds, pairs, involved, n, cfg, out, parallel);
    } else {
        fill_pairs_local(ds, pairs, involved, n, cfg, out, parallel);
    }
}

DistanceMatrix compute_matrix(const PathDataset& ds, Measure measure,
                              const DissimilarityConfig& cfg, bool parallel) {
    validate_dataset(ds);
    validate_config(cfg);
    DistanceMatrix out(ds.size());
    fill_pairs(ds, upper_pairs(ds.size()), measure, cfg, out, parallel);
    return out;
}

}  // namespace

DistanceMatrix DistanceMatrix::leading(std::size_t j) const {
    DistanceMatrix out(j);
    for (std::size_t r = 0; r < j; ++r)
        for (std::size_t c = 0; c < j; ++c) out(r, c) = (*this)(r, c);
    return out;
}

DistanceMatrix dissimilarity_matrix(const PathDataset& dataset, Measure measure,
                                    const DissimilarityConfig& cfg) {
    return compute_matrix(dataset, measure, cfg, true);
}

DistanceMatrix dissimilarity_matrix_serial(const PathDataset& dataset, Measure measure,
                                           const DissimilarityConfig& cfg) {
    return compute_matrix(dataset, measure, cfg, false);
}

DistanceMatrix dissimilarity_matrix_update(const PathDataset& previous,
                                           const DistanceMatrix& previous_matrix,
                                           const PathDataset& next, Measure measure,
                                           const DissimilarityConfig& cfg) {
    validate_dataset(next);
    validate_config(cfg);
    if (previous_matrix.size() != previous.size()) {
        throw Error(Errc::MalformedMatrix, "cached matrix does not match previous snapshot");
    }
    const std::size_t n = next.size();
    std::vector<bool> unchanged(n, false);
    for (std::size_t i = 0; i < std::min(n, previous.size()); ++i) {
        unchanged[i] = previous.paths[i].values == next.paths[i].values;
    }
    DistanceMatrix out(n);
    std::vector<Pair> todo;
    for (const auto& p : upper_pairs(n)) {
        if (unchanged[p.i] && unchanged[p.j]) {
            out.set(p.i, p.j, previous_matrix(p.i, p.j));
        } else {
            todo.push_back(p);
        }
    }
    fill_pairs(next, todo, measure, cfg, out, true);
    return out;
}

}  // namespace pathclust
