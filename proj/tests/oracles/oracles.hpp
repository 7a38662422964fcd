#pragma once

// Brute-force reference implementations used only by the tests. They follow
// the textbook formulas directly: no prefix sums, no shared helpers with the
// library, long double accumulation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

struct Config {
    bool inverse_square = false;  // else 1/(j(j+1))
    bool sqrt_rule = false;       // else floor(log2 n)
    bool log_damp = false;
    bool center = false;
    int K = 10;
};

inline long double w(const Config& c, std::size_t j) {
    const long double x = static_cast<long double>(j);
    return c.inverse_square ? 1.0L / (x * x) : 1.0L / (x * (x + 1.0L));
}

inline std::size_t m_of(const Config& c, std::size_t n) {
    std::size_t m = 1;
    if (c.sqrt_rule) {
        while ((m + 1) * (m + 1) <= n) ++m;
    } else {
        while ((std::size_t{1} << (m + 1)) <= n) ++m;
    }
    return std::min(std::max<std::size_t>(m, 1), n);
}

inline long double t(const Config& c, long double v) {
    if (!c.log_damp) return v;
    const long double a = std::log(1.0L + std::fabs(v));
    return v < 0 ? -a : a;
}

// Entry (a, b) of the average outer product of the length-m windows of x
// starting at 1-based positions l..n-m+1.
inline long double nu(const std::vector<double>& x, std::size_t l, std::size_t m, std::size_t n,
                      std::size_t a, std::size_t b) {
    long double s = 0;
    for (std::size_t i = l; i <= n - m + 1; ++i)
        s += static_cast<long double>(x[i - 1 + a]) * static_cast<long double>(x[i - 1 + b]);
    return s / static_cast<long double>(n - m - l + 2);
}

inline std::vector<double> head(const std::vector<double>& x, std::size_t n, bool center) {
    std::vector<double> h(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    if (center) {
        long double mean = 0;
        for (double v : h) mean += v;
        mean /= static_cast<long double>(n);
        for (double& v : h) v = static_cast<double>(v - mean);
    }
    return h;
}

inline double dhat(const std::vector<double>& x1, const std::vector<double>& x2, const Config& c) {
    const std::size_t n = std::min(x1.size(), x2.size());
    const auto a = head(x1, n, c.center);
    const auto b = head(x2, n, c.center);
    long double total = 0;
    for (std::size_t m = 1; m <= m_of(c, n); ++m) {
        for (std::size_t l = 1; l <= n - m + 1; ++l) {
            long double f = 0;
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t q = 0; q < m; ++q) {
                    const long double d = t(c, nu(a, l, m, n, r, q)) - t(c, nu(b, l, m, n, r, q));
                    f += d * d;
                }
            }
            total += w(c, m) * w(c, l) * std::sqrt(f);
        }
    }
    return static_cast<double>(total);
}

inline double dstar(const std::vector<double>& z1, const std::vector<double>& z2, const Config& c) {
    const std::size_t n = std::min(z1.size(), z2.size());
    const std::size_t K = static_cast<std::size_t>(c.K);
    long double total = 0;
    const std::size_t count = n - K - 1;
    for (std::size_t i = 1; i <= count; ++i) {
        std::vector<double> a, b;
        for (std::size_t j = i; j <= i + K; ++j) {
            a.push_back(z1[j] - z1[j - 1]);
            b.push_back(z2[j] - z2[j - 1]);
        }
        total += dhat(a, b, c);
    }
    return static_cast<double>(total / static_cast<long double>(count));
}

// offline farthest-first clustering transcribed line by line on a full matrix d (0-based indices).
struct Offline {
    std::vector<std::size_t> centers;
    std::vector<int> labels;
};

inline Offline algorithm1(const std::vector<std::vector<double>>& d, int kappa, bool literal) {
    const std::size_t N = d.size();
    Offline out;
    out.labels.assign(N, 0);
    if (N == 1) {
        out.centers = {0};
        out.labels = {1};
        return out;
    }
    // (c1, c2) <- argmax d(z_i, z_j), first pair in lexicographic order
    std::size_t c1 = 0, c2 = 1;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (d[i][j] > d[c1][c2]) c1 = i, c2 = j;
    out.centers.push_back(c1);
    if (kappa >= 2) out.centers.push_back(c2);
    // for k = 3..kappa: c_k <- argmax_i min_{j<k} d(z_i, z_{c_j})
    for (int k = 3; k <= kappa; ++k) {
        std::size_t best = N;
        double best_val = -1;
        for (std::size_t i = 0; i < N; ++i) {
            if (std::find(out.centers.begin(), out.centers.end(), i) != out.centers.end()) continue;
            double mn = std::numeric_limits<double>::infinity();
            for (std::size_t c : out.centers) mn = std::min(mn, d[i][c]);
            if (mn > best_val) best_val = mn, best = i;
        }
        out.centers.push_back(best);
    }
    // C_k <- {c_k}
    std::vector<std::vector<std::size_t>> C(static_cast<std::size_t>(kappa));
    for (int k = 0; k < kappa; ++k) {
        C[static_cast<std::size_t>(k)].push_back(out.centers[static_cast<std::size_t>(k)]);
        out.labels[out.centers[static_cast<std::size_t>(k)]] = k + 1;
    }
    // for i = 1..N: k <- argmin min{d(z_i, z_j): j in C_k}; C_k <- C_k U {i}
    for (std::size_t i = 0; i < N; ++i) {
        if (out.labels[i] != 0) continue;
        int arg = 0;
        double val = std::numeric_limits<double>::infinity();
        for (int k = 0; k < kappa; ++k) {
            double mn = std::numeric_limits<double>::infinity();
            if (literal) {
                for (std::size_t j : C[static_cast<std::size_t>(k)]) mn = std::min(mn, d[i][j]);
            } else {
                mn = d[i][out.centers[static_cast<std::size_t>(k)]];
            }
            if (mn < val) val = mn, arg = k;
        }
        C[static_cast<std::size_t>(arg)].push_back(i);
        out.labels[i] = arg + 1;
    }
    return out;
}

// Minimum mismatch fraction over every bijection of the label alphabet.
inline double misclustering(const std::vector<int>& predicted, const std::vector<int>& truth) {
    int L = 0;
    for (int v : predicted) L = std::max(L, v);
    for (int v : truth) L = std::max(L, v);
    std::vector<int> perm(static_cast<std::size_t>(L));
    std::iota(perm.begin(), perm.end(), 1);
    std::size_t best = predicted.size();
    do {
        std::size_t miss = 0;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (perm[static_cast<std::size_t>(truth[i] - 1)] != predicted[i]) ++miss;
        best = std::min(best, miss);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(truth.size());
}

inline long double fgn_acov(long double k, long double H, long double sigma) {
    auto p = [&](long double x) { return std::pow(std::fabs(x), 2 * H); };
    return sigma * sigma / 2 * (p(k + 1) - 2 * p(k) + p(k - 1));
}

}  // namespace oracle
